#pragma once

// Parameter sweeps and root finding on the regenerator balance Q_R.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "fqse/cycle.hpp"
#include "fqse/error.hpp"

namespace fqse {

inline constexpr double kDefaultRootTol = 1e-8;
inline constexpr std::size_t kDefaultScanSamples = 64;

enum class Parameter { width_a, width_b, alpha_1, alpha_2 };

/// Short names used on the command line and in CSV headers.
inline const char* to_string(Parameter p) {
    switch (p) {
        case Parameter::width_a: return "la";
        case Parameter::width_b: return "lb";
        case Parameter::alpha_1: return "alpha1";
        case Parameter::alpha_2: return "alpha2";
    }
    return "?";
}

inline std::optional<Parameter> parse_parameter(std::string_view s) {
    if (s == "la" || s == "width_a") return Parameter::width_a;
    if (s == "lb" || s == "width_b") return Parameter::width_b;
    if (s == "alpha1" || s == "a1" || s == "alpha_1") return Parameter::alpha_1;
    if (s == "alpha2" || s == "a2" || s == "alpha_2") return Parameter::alpha_2;
    return std::nullopt;
}

inline bool is_fractional(Parameter p) {
    return p == Parameter::alpha_1 || p == Parameter::alpha_2;
}

inline double get_parameter(const CycleParams& c, Parameter p) {
    switch (p) {
        case Parameter::width_a: return c.width_a;
        case Parameter::width_b: return c.width_b;
        case Parameter::alpha_1: return c.alpha_1;
        case Parameter::alpha_2: return c.alpha_2;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

inline void set_parameter(CycleParams& c, Parameter p, double v) {
    switch (p) {
        case Parameter::width_a: c.width_a = v; break;
        case Parameter::width_b: c.width_b = v; break;
        case Parameter::alpha_1: c.alpha_1 = v; break;
        case Parameter::alpha_2: c.alpha_2 = v; break;
    }
}

inline CycleParams with_parameter(CycleParams c, Parameter p, double v) {
    set_parameter(c, p, v);
    return c;
}

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Closed range a root search may sample. Fractional parameters stay 1e-6 clear
/// of the excluded endpoint alpha = 1.
inline Interval search_domain(Parameter p) {
    if (is_fractional(p)) return {1.0 + 1e-6, 2.0};
    return {std::numeric_limits<double>::min(), std::numeric_limits<double>::infinity()};
}

// --------------------------------------------------------------------------
// Sweeps

struct SweepAxis {
    Parameter parameter = Parameter::alpha_1;
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 2;

    void validate() const {
        const std::string name = to_string(parameter);
        if (count < 2) throw std::invalid_argument("axis " + name + " needs at least 2 nodes");
        if (!(lo < hi)) throw std::invalid_argument("axis " + name + " needs lo < hi");
        if (is_fractional(parameter) ? !(lo > 1.0 && hi <= 2.0) : !(lo > 0.0 && std::isfinite(hi)))
            throw std::invalid_argument("axis " + name + " leaves the parameter's valid range");
    }

    /// Node i of count, with the last node pinned to hi.
    double value(std::size_t i) const {
        if (i + 1 == count) return hi;
        return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
};

struct SweepNode {
    double x = 0.0;
    double y = 0.0;
    std::optional<CycleReport> report;
    std::string error;  ///< set iff report is empty

    bool ok() const noexcept { return report.has_value(); }
};

struct SweepGrid {
    SweepAxis axis_x;
    SweepAxis axis_y;
    CycleParams base;
    std::vector<SweepNode> nodes;  ///< row-major: x index outer, y index inner

    const SweepNode& at(std::size_t i, std::size_t j) const { return nodes[i * axis_y.count + j]; }
};

namespace detail {

// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is
// handled exactly once; body must only write state owned by index i.
template <class Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) body(i);
            });
    }
}

}  // namespace detail

/// Evaluates the cycle on every node of the x/y grid. Failing nodes carry an
/// error message instead of a report; the grid is always complete. Output does
/// not depend on `threads` (0 = hardware concurrency).
inline SweepGrid sweep(const CycleParams& base, const SweepAxis& axis_x, const SweepAxis& axis_y,
                       double rel_tol = kDefaultRelTol, unsigned threads = 0) {
    axis_x.validate();
    axis_y.validate();
    if (axis_x.parameter == axis_y.parameter)
        throw std::invalid_argument("sweep axes must name distinct parameters");

    SweepGrid grid{axis_x, axis_y, base, {}};
    grid.nodes.resize(axis_x.count * axis_y.count);
    detail::parallel_for(grid.nodes.size(), threads, [&](std::size_t k) {
        SweepNode& node = grid.nodes[k];
        node.x = axis_x.value(k / axis_y.count);
        node.y = axis_y.value(k % axis_y.count);
        CycleParams p = base;
        set_parameter(p, axis_x.parameter, node.x);
        set_parameter(p, axis_y.parameter, node.y);
        try {
            node.report = evaluate(p, rel_tol);
        } catch (const std::exception& e) {
            node.error = e.what();
        }
    });
    return grid;
}

// --------------------------------------------------------------------------
// Root finding on Q_R

struct RegenerationPoint {
    CycleParams params;
    double residual = 0.0;  ///< |Q_R| at params
    CycleReport report;
    int evaluations = 0;
};

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
    double q_lo = 0.0;
    double q_hi = 0.0;
};

/// Samples Q_R at `samples` uniform points of [lo, hi] clipped to the search
/// domain and returns every sign-change interval in increasing order. A sample
/// where Q_R is exactly zero is returned as a point bracket. Samples whose
/// evaluation throws are skipped.
inline std::vector<Bracket> find_brackets(const CycleParams& base, Parameter p, double lo, double hi,
                                          std::size_t samples = kDefaultScanSamples,
                                          double rel_tol = kDefaultRelTol) {
    const Interval dom = search_domain(p);
    lo = std::max(lo, dom.lo);
    hi = std::min(hi, dom.hi);
    if (!(lo < hi)) throw std::invalid_argument("bracket is empty after clipping to the domain");
    if (samples < 2) throw std::invalid_argument("bracket scan needs at least 2 samples");

    std::vector<double> xs(samples), qs(samples, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < samples; ++i) {
        xs[i] = i + 1 == samples ? hi : lo + (hi - lo) * static_cast<double>(i) / (samples - 1);
        try {
            qs[i] = evaluate(with_parameter(base, p, xs[i]), rel_tol).q_r;
        } catch (const std::exception&) {
        }
    }

    std::vector<Bracket> out;
    for (std::size_t i = 0; i < samples; ++i) {
        if (qs[i] == 0.0) out.push_back({xs[i], xs[i], 0.0, 0.0});
        if (i + 1 == samples) break;
        const double a = qs[i], b = qs[i + 1];
        if (std::isfinite(a) && std::isfinite(b) && a != 0.0 && b != 0.0 && (a < 0.0) != (b < 0.0))
            out.push_back({xs[i], xs[i + 1], a, b});
    }
    return out;
}

struct RootResult {
    double x = 0.0;
    double fx = 0.0;
    int evaluations = 0;
};

/// Bracketed root of a scalar function: bisection with secant acceleration.
///
/// f(a) and f(b) must have opposite signs (or one of them |f| <= tol). The
/// secant step is taken only when it lands strictly inside the current bracket
/// and the previous secant step at least halved the bracket; otherwise the step
/// bisects. Every evaluation lies in [a, b] and the bracket only shrinks.
/// Returns the first x with |f(x)| <= tol.
template <class F>
RootResult find_root(F&& f, double a, double b, double tol, int max_evaluations = 400) {
    int evals = 0;
    auto call = [&](double x) {
        ++evals;
        return f(x);
    };
    double fa = call(a);
    if (std::abs(fa) <= tol) return {a, fa, evals};
    double fb = call(b);
    if (std::abs(fb) <= tol) return {b, fb, evals};
    if ((fa < 0.0) == (fb < 0.0))
        throw no_root("no sign change on [" + std::to_string(a) + ", " + std::to_string(b) +
                          "]: f(lo)=" + std::to_string(fa) + ", f(hi)=" + std::to_string(fb),
                      fa, fb);

    bool allow_secant = true;
    while (evals < max_evaluations) {
        const double width = b - a;
        double x = 0.5 * (a + b);
        bool secant = false;
        if (allow_secant) {
            const double s = b - fb * (b - a) / (fb - fa);
            if (s > a && s < b) {
                x = s;
                secant = true;
            }
        }
        const double fx = call(x);
        if (std::abs(fx) <= tol) return {x, fx, evals};
        if ((fx < 0.0) == (fa < 0.0)) {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        allow_secant = !secant || (b - a) <= 0.5 * width;
        if (b - a <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b)))
            break;
    }
    throw std::runtime_error("root search stopped before |f| <= " + std::to_string(tol) +
                             " (bracket [" + std::to_string(a) + ", " + std::to_string(b) + "])");
}

/// Root of Q_R in parameter p within [lo, hi] clipped to the search domain.
/// Throws no_root (carrying both endpoint residuals) when Q_R does not change
/// sign, non_finite_residual when Q_R is NaN or infinite.
inline RegenerationPoint solve(const CycleParams& base, Parameter p, double lo, double hi,
                               double tol = kDefaultRootTol, double rel_tol = kDefaultRelTol,
                               int max_evaluations = 400) {
    if (!(tol > 0.0)) throw std::invalid_argument("root tolerance must be positive");
    const Interval dom = search_domain(p);
    const double a = std::max(lo, dom.lo);
    const double b = std::min(hi, dom.hi);
    if (!(a <= b)) throw std::invalid_argument("bracket is empty after clipping to the domain");

    auto q_r = [&](double x) {
        const double q = evaluate(with_parameter(base, p, x), rel_tol).q_r;
        if (!std::isfinite(q))
            throw non_finite_residual("Q_R is not finite at " + std::string(to_string(p)) + "=" +
                                      std::to_string(x));
        return q;
    };
    RootResult root;
    try {
        root = find_root(q_r, a, b, tol, max_evaluations);
    } catch (const no_root& e) {
        throw no_root(std::string(to_string(p)) + ": " + e.what(), e.residual_lo(), e.residual_hi());
    }
    RegenerationPoint out;
    out.params = with_parameter(base, p, root.x);
    out.report = evaluate(out.params, rel_tol);
    out.residual = std::abs(out.report.q_r);
    out.evaluations = root.evaluations;
    return out;
}

/// Solves Q_R = 0 for alpha_1 with alpha_2 held at alpha_2_fixed.
inline RegenerationPoint solve_alpha1(const CycleParams& base, double alpha_2_fixed,
                                      double bracket_lo, double bracket_hi,
                                      double tol = kDefaultRootTol,
                                      double rel_tol = kDefaultRelTol) {
    return solve(with_parameter(base, Parameter::alpha_2, alpha_2_fixed), Parameter::alpha_1,
                 bracket_lo, bracket_hi, tol, rel_tol);
}

// --------------------------------------------------------------------------
// Curve tracing

struct TracePoint {
    double sweep_value = 0.0;
    std::optional<RegenerationPoint> point;  ///< empty = gap
    std::string note;                        ///< why this node is a gap
};

struct TraceOptions {
    double rel_tol = kDefaultRelTol;
    std::size_t samples = kDefaultScanSamples;
    /// Where to look for the first root when a node has several; defaults to
    /// the upper end of the bracket.
    std::optional<double> seed;
};

inline bool all_gaps(std::span<const TracePoint> curve) {
    return std::none_of(curve.begin(), curve.end(), [](const auto& t) { return t.point.has_value(); });
}

/// Follows one branch of the Q_R = 0 locus: for each grid value of
/// sweep_param, scans solve_param over the bracket, takes the sign-change
/// interval nearest the previous root (the seed for the first node) and
/// solves inside it. Nodes without a bracketed root become gaps; order follows
/// the grid.
inline std::vector<TracePoint> trace_curve(const CycleParams& base, Parameter sweep_param,
                                           Parameter solve_param, std::span<const double> grid,
                                           Interval bracket, double tol = kDefaultRootTol,
                                           const TraceOptions& opts = {}) {
    if (sweep_param == solve_param)
        throw std::invalid_argument("sweep and solve parameters must differ");
    if (grid.empty()) throw std::invalid_argument("trace grid is empty");
    if (grid.size() > 1) {
        const bool up = grid[1] > grid[0];
        for (std::size_t i = 1; i < grid.size(); ++i)
            if (up ? !(grid[i] > grid[i - 1]) : !(grid[i] < grid[i - 1]))
                throw std::invalid_argument("trace grid must be strictly monotone");
    }

    std::vector<TracePoint> out;
    out.reserve(grid.size());
    double anchor = opts.seed.value_or(bracket.hi);
    for (const double value : grid) {
        TracePoint tp;
        tp.sweep_value = value;
        try {
            const CycleParams at = with_parameter(base, sweep_param, value);
            at.validate();
            const auto found =
                find_brackets(at, solve_param, bracket.lo, bracket.hi, opts.samples, opts.rel_tol);
            if (found.empty()) {
                tp.note = "no sign change of Q_R in bracket";
            } else {
                auto distance = [&](const Bracket& br) {
                    if (anchor < br.lo) return br.lo - anchor;
                    if (anchor > br.hi) return anchor - br.hi;
                    return 0.0;
                };
                const Bracket& pick = *std::min_element(
                    found.begin(), found.end(),
                    [&](const Bracket& l, const Bracket& r) { return distance(l) < distance(r); });
                tp.point = solve(at, solve_param, pick.lo, pick.hi, tol, opts.rel_tol);
                anchor = get_parameter(tp.point->params, solve_param);
            }
        } catch (const std::exception& e) {
            tp.point.reset();
            tp.note = e.what();
        }
        out.push_back(std::move(tp));
    }
    return out;
}

}  // namespace fqse

#pragma once

// Command-line front end. run() is the whole program; main() only forwards to
// it so tests can drive the commands in-process.
//
// Exit codes: 0 success, 1 computational failure, 2 usage error.

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <locale>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fqse/fqse.hpp"

namespace fqse::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct usage_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline double parse_real(const std::string& s, const std::string& what) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end) throw usage_error("bad number '" + s + "' in " + what);
    return v;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

inline Parameter parse_parameter_or_throw(const std::string& s) {
    if (auto p = parse_parameter(s)) return *p;
    throw usage_error("unknown parameter '" + s + "' (expected la, lb, alpha1 or alpha2)");
}

/// NAME=lo:hi:count
inline SweepAxis parse_axis(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) throw usage_error("axis '" + spec + "' must look like NAME=lo:hi:count");
    const auto range = split(spec.substr(eq + 1), ':');
    if (range.size() != 3) throw usage_error("axis '" + spec + "' must look like NAME=lo:hi:count");
    SweepAxis axis;
    axis.parameter = parse_parameter_or_throw(spec.substr(0, eq));
    axis.lo = parse_real(range[0], spec);
    axis.hi = parse_real(range[1], spec);
    const double count = parse_real(range[2], spec);
    if (count != static_cast<double>(static_cast<std::size_t>(count)))
        throw usage_error("axis count must be a whole number in '" + spec + "'");
    axis.count = static_cast<std::size_t>(count);
    try {
        axis.validate();
    } catch (const std::invalid_argument& e) {
        throw usage_error(e.what());
    }
    return axis;
}

inline const std::vector<std::string>& report_header() {
    static const std::vector<std::string> h{"L_A", "L_B", "alpha1", "alpha2", "T_h", "T_c",
                                            "m", "Q_AB", "Q_BC", "Q_CD", "Q_DA", "W",
                                            "Q_R", "Q_h", "eta", "eta_carnot", "regime"};
    return h;
}

inline std::vector<std::string> report_fields(const CycleParams& p, const CycleReport* r) {
    using csv::number;
    std::vector<std::string> f{number(p.width_a), number(p.width_b),
                               number(p.alpha_1), number(p.alpha_2),
                               number(p.t_hot),   number(p.t_cold),
                               number(p.mass)};
    if (r) {
        for (double v : {r->q_ab, r->q_bc, r->q_cd, r->q_da, r->work, r->q_r, r->q_h,
                         r->efficiency, r->carnot})
            f.push_back(number(v));
        f.emplace_back(to_string(r->regime));
    } else {
        for (int i = 0; i < 9; ++i) f.emplace_back("nan");
        f.emplace_back("error");
    }
    return f;
}

// Flags shared by the cycle, sweep and trace commands.
struct CycleFlags {
    std::optional<double> la, lb, a1, a2;
    double th = 4.0;
    double tc = 3.0;
    double mass = 1.0;
    std::string convention = "half-width";
    std::size_t levels = kReferenceModel.levels;
    double rel_tol = kDefaultRelTol;
    std::string out;

    void attach(CLI::App* cmd) {
        cmd->add_option("--la", la, "well width L_A = L_D");
        cmd->add_option("--lb", lb, "well width L_B = L_C");
        cmd->add_option("--a1", a1, "fractional parameter alpha_1 (corners B, C)");
        cmd->add_option("--a2", a2, "fractional parameter alpha_2 (corners A, D)");
        cmd->add_option("--th", th, "hot bath temperature")->capture_default_str();
        cmd->add_option("--tc", tc, "cold bath temperature")->capture_default_str();
        cmd->add_option("--mass", mass, "particle mass")->capture_default_str();
        cmd->add_option("--convention", convention, "width convention of the spectrum")
            ->check(CLI::IsMember({"half-width", "full-period"}))
            ->capture_default_str();
        cmd->add_option("--levels", levels, "retained levels (0 = full spectrum)")
            ->capture_default_str();
        cmd->add_option("--rel-tol", rel_tol, "partition-sum tolerance")->capture_default_str();
        cmd->add_option("--out", out, "write CSV here instead of standard output");
    }

    /// Builds CycleParams; every parameter not in `free` must have been given.
    CycleParams params(std::initializer_list<Parameter> free = {}) const {
        CycleParams p;
        auto take = [&](const std::optional<double>& v, Parameter which, double& dst) {
            const bool is_free = std::find(free.begin(), free.end(), which) != free.end();
            if (v) dst = *v;
            else if (!is_free)
                throw usage_error(std::string("missing required flag for ") + to_string(which));
        };
        take(la, Parameter::width_a, p.width_a);
        take(lb, Parameter::width_b, p.width_b);
        take(a1, Parameter::alpha_1, p.alpha_1);
        take(a2, Parameter::alpha_2, p.alpha_2);
        p.t_hot = th;
        p.t_cold = tc;
        p.mass = mass;
        p.model.convention =
            convention == "full-period" ? WidthConvention::full_period : WidthConvention::half_width;
        p.model.levels = levels;
        if (levels > SpectrumModel::max_levels) throw usage_error("--levels exceeds 10^6");
        if (!(rel_tol > 0.0 && rel_tol <= 1e-6)) throw usage_error("--rel-tol must lie in (0, 1e-6]");
        // Parameters that will be overwritten by a sweep still get a valid placeholder.
        CycleParams check = p;
        for (Parameter f : free) set_parameter(check, f, is_fractional(f) ? 2.0 : 1.0);
        try {
            check.validate();
        } catch (const std::invalid_argument& e) {
            throw usage_error(e.what());
        }
        return p;
    }
};

inline void warn_direction(const CycleParams& p, std::ostream& err) {
    if (p.alpha_1 >= p.alpha_2)
        err << "warning: alpha1 >= alpha2; the forward cycle convention is alpha1 < alpha2\n";
}

// Opens --out when given; otherwise writes to `fallback`.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary | std::ios::trunc);
            if (!file_) throw std::runtime_error("cannot open output file " + path);
            file_.imbue(std::locale::classic());
            os_ = &file_;
        }
    }
    std::ostream& stream() { return *os_; }

private:
    std::ofstream file_;
    std::ostream* os_;
};

inline int cmd_cycle(const CycleFlags& flags, std::ostream& out, std::ostream& err) {
    const CycleParams p = flags.params();
    warn_direction(p, err);
    const CycleReport r = evaluate(p, flags.rel_tol);
    Sink sink(flags.out, out);
    csv::write_row(sink.stream(), report_header());
    csv::write_row(sink.stream(), report_fields(p, &r));
    return kExitOk;
}

struct SweepFlags {
    std::string x, y;
    unsigned threads = 0;
};

inline int cmd_sweep(const CycleFlags& flags, const SweepFlags& sf, std::ostream& out,
                     std::ostream& err) {
    const SweepAxis ax = parse_axis(sf.x);
    const SweepAxis ay = parse_axis(sf.y);
    if (ax.parameter == ay.parameter) throw usage_error("--x and --y must name distinct parameters");
    const CycleParams base = flags.params({ax.parameter, ay.parameter});
    if (!is_fractional(ax.parameter) && !is_fractional(ay.parameter)) warn_direction(base, err);

    const SweepGrid grid = sweep(base, ax, ay, flags.rel_tol, sf.threads);
    Sink sink(flags.out, out);
    std::vector<std::string> header{"x", "y"};
    header.insert(header.end(), report_header().begin(), report_header().end());
    header.emplace_back("error");
    csv::write_row(sink.stream(), header);
    for (const SweepNode& node : grid.nodes) {
        CycleParams p = base;
        set_parameter(p, ax.parameter, node.x);
        set_parameter(p, ay.parameter, node.y);
        std::vector<std::string> row{csv::number(node.x), csv::number(node.y)};
        const auto fields = report_fields(p, node.report ? &*node.report : nullptr);
        row.insert(row.end(), fields.begin(), fields.end());
        row.push_back(csv::field(node.error));
        csv::write_row(sink.stream(), row);
    }
    return kExitOk;
}

struct TraceFlags {
    std::string sweep;
    std::string solve;
    std::string bracket;
    double tol = kDefaultRootTol;
    std::optional<double> seed;
};

inline int cmd_trace(const CycleFlags& flags, const TraceFlags& tf, std::ostream& out,
                     std::ostream& err) {
    const SweepAxis axis = parse_axis(tf.sweep);
    const Parameter solve_param = parse_parameter_or_throw(tf.solve);
    if (solve_param == axis.parameter) throw usage_error("--sweep and --solve must differ");

    Interval bracket = is_fractional(solve_param) ? Interval{1.0, 2.0} : Interval{0.1, 5.0};
    if (!tf.bracket.empty()) {
        const auto parts = split(tf.bracket, ':');
        if (parts.size() != 2) throw usage_error("--bracket must look like lo:hi");
        bracket = {parse_real(parts[0], "--bracket"), parse_real(parts[1], "--bracket")};
        if (!(bracket.lo < bracket.hi)) throw usage_error("--bracket needs lo < hi");
    }
    if (!(tf.tol > 0.0)) throw usage_error("--tol must be positive");
    const CycleParams base = flags.params({axis.parameter, solve_param});

    std::vector<double> grid(axis.count);
    for (std::size_t i = 0; i < axis.count; ++i) grid[i] = axis.value(i);
    TraceOptions opts;
    opts.rel_tol = flags.rel_tol;
    opts.seed = tf.seed;
    const auto curve = trace_curve(base, axis.parameter, solve_param, grid, bracket, tf.tol, opts);
    if (all_gaps(curve)) err << "warning: no point of the Q_R = 0 locus found on this grid\n";

    Sink sink(flags.out, out);
    csv::write_row(sink.stream(), {to_string(axis.parameter), to_string(solve_param), "residual",
                                   "eta", "eta_carnot", "status"});
    for (const TracePoint& tp : curve) {
        if (tp.point) {
            const auto& pt = *tp.point;
            csv::write_row(sink.stream(),
                           {csv::number(tp.sweep_value),
                            csv::number(get_parameter(pt.params, solve_param)),
                            csv::number(pt.residual), csv::number(pt.report.efficiency),
                            csv::number(pt.report.carnot), "ok"});
        } else {
            csv::write_row(sink.stream(), {csv::number(tp.sweep_value), "nan", "nan", "nan", "nan",
                                           "gap"});
        }
    }
    return kExitOk;
}

/// Checks every row of the regeneration table: Q_R at alpha = 2 against the
/// tabulated column, and |Q_R| at the tabulated (alpha_1, alpha_2).
inline int cmd_table1(const std::string& out_path, std::ostream& out, std::ostream& err) {
    Sink sink(out_path, out);
    std::ostream& os = sink.stream();
    csv::write_row(os, {"L_A", "L_B", "Q_R_std_table", "Q_R_std", "std_ok", "alpha1", "alpha2",
                        "Q_R_pair", "eta_pair", "pair_ok"});
    bool all_ok = true;
    for (const RegenerationRow& row : kRegenerationTable) {
        CycleParams p;
        p.width_a = row.width_a;
        p.width_b = row.width_b;
        p.alpha_1 = p.alpha_2 = 2.0;
        const CycleReport standard = evaluate(p);
        p.alpha_1 = row.alpha_1;
        p.alpha_2 = row.alpha_2;
        const CycleReport pair = evaluate(p);
        const bool std_ok = std::abs(standard.q_r - row.q_r_standard) <= kStandardColumnTol;
        const bool pair_ok = std::abs(pair.q_r) <= kPairResidualTol;
        all_ok = all_ok && std_ok && pair_ok;
        csv::write_row(os, {csv::number(row.width_a), csv::number(row.width_b),
                            csv::number(row.q_r_standard), csv::number(standard.q_r),
                            std_ok ? "pass" : "FAIL", csv::number(row.alpha_1),
                            csv::number(row.alpha_2), csv::number(pair.q_r),
                            csv::number(pair.efficiency), pair_ok ? "pass" : "FAIL"});
    }
    if (!all_ok) err << "regeneration table check failed\n";
    return all_ok ? kExitOk : kExitFailure;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
    CLI::App app{"Thermodynamics of a fractional quantum Stirling engine"};
    app.require_subcommand(1);

    CycleFlags cycle_flags, sweep_flags, trace_flags;
    SweepFlags sweep_extra;
    TraceFlags trace_extra;
    std::string table_out;

    auto* cycle = app.add_subcommand("cycle", "evaluate one cycle");
    cycle_flags.attach(cycle);

    auto* sweep_cmd = app.add_subcommand("sweep", "evaluate the cycle on a 2-D grid");
    sweep_flags.attach(sweep_cmd);
    sweep_cmd->add_option("--x", sweep_extra.x, "outer axis NAME=lo:hi:count")->required();
    sweep_cmd->add_option("--y", sweep_extra.y, "inner axis NAME=lo:hi:count")->required();
    sweep_cmd->add_option("--threads", sweep_extra.threads, "worker threads (0 = all cores)");

    auto* trace = app.add_subcommand("trace", "follow the Q_R = 0 locus");
    trace_flags.attach(trace);
    trace->add_option("--sweep", trace_extra.sweep, "swept parameter NAME=lo:hi:count")->required();
    trace->add_option("--solve", trace_extra.solve, "parameter solved for Q_R = 0")->required();
    trace->add_option("--bracket", trace_extra.bracket, "search range lo:hi of the solved parameter");
    trace->add_option("--tol", trace_extra.tol, "tolerance on |Q_R|")->capture_default_str();
    trace->add_option("--seed", trace_extra.seed, "start the first solve nearest this value");

    auto* table = app.add_subcommand("table1", "check the published regeneration table");
    table->add_option("--out", table_out, "write the report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    }

    try {
        if (*cycle) return cmd_cycle(cycle_flags, out, err);
        if (*sweep_cmd) return cmd_sweep(sweep_flags, sweep_extra, out, err);
        if (*trace) return cmd_trace(trace_flags, trace_extra, out, err);
        return cmd_table1(table_out, out, err);
    } catch (const usage_error& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

}  // namespace fqse::cli

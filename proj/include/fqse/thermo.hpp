#pragma once

// Canonical-ensemble quantities of one well at one temperature.
//
// Boltzmann weights are accumulated relative to the ground state,
// w_n = exp(-beta (E_n - E_1)), so nothing underflows when beta E_1 is large.
// For the untruncated spectrum the sum stops once a ratio bound on the
// remaining tail drops below rel_tol; see summarize().

#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fqse/error.hpp"
#include "fqse/spectrum.hpp"

namespace fqse {

inline constexpr double kDefaultRelTol = 1e-12;

/// A WellSpec held at temperature T > 0 (k_B = 1).
class ThermalState {
public:
    ThermalState(WellSpec well, double temperature) : well_(well), temperature_(temperature) {
        if (!(temperature > 0.0) || !std::isfinite(temperature))
            throw std::invalid_argument("temperature must be positive and finite, got " +
                                        std::to_string(temperature));
    }

    const WellSpec& well() const noexcept { return well_; }
    double temperature() const noexcept { return temperature_; }
    double beta() const noexcept { return 1.0 / temperature_; }

    friend bool operator==(const ThermalState&, const ThermalState&) = default;

private:
    WellSpec well_;
    double temperature_;
};

struct EnsembleSummary {
    /// Z. Underflows to 0 once beta E_1 exceeds ~745; log_partition_function does not.
    double partition_function = 0.0;
    double log_partition_function = 0.0;
    std::vector<double> occupations;  ///< P_1 .. P_{n_cut}
    double internal_energy = 0.0;
    double entropy = 0.0;
    double free_energy = 0.0;
    std::size_t n_cut = 0;
    /// Upper bound on (neglected tail of Z) / (retained Z). Zero for finite-level models.
    double tail_bound = 0.0;
};

namespace detail {

inline std::string describe(const ThermalState& s) {
    std::ostringstream os;
    os.precision(17);
    os << "(L=" << s.well().width() << ", alpha=" << s.well().alpha() << ", m=" << s.well().mass()
       << ", T=" << s.temperature() << ")";
    return os.str();
}

// beta (E_n - E_1) for the ground-state scale c = beta E_1.
inline double reduced_gap(double c, double alpha, std::size_t n) {
    return c * (std::pow(static_cast<double>(n), alpha) - 1.0);
}

}  // namespace detail

/// Partition function, occupations, U, S and F of a Gibbs state.
///
/// Untruncated spectrum: weights are added for n = 1, 2, ... until a geometric
/// bound on the remaining tail drops below rel_tol. With r = w_{N+2} / w_{N+1},
/// the tail of Z is at most w_{N+1} / (1 - r) because E_n grows like n^alpha with
/// alpha > 1, so successive weight ratios only shrink. The same argument bounds
/// the gap-weighted tail that enters U and S. More than SpectrumModel::max_levels
/// terms throws truncation_error.
///
/// Finite-level model: the sum over 1..levels is exact and tail_bound is 0.
inline EnsembleSummary summarize(const ThermalState& state, double rel_tol = kDefaultRelTol) {
    if (!(rel_tol > 0.0 && rel_tol <= 1e-6))
        throw std::invalid_argument("rel_tol must lie in (0, 1e-6]");

    const WellSpec& well = state.well();
    const double alpha = well.alpha();
    const double e1 = ground_energy(well);
    const double c = state.beta() * e1;

    std::vector<double> gaps{0.0};     // beta (E_n - E_1)
    std::vector<double> weights{1.0};  // exp(-gap)
    double excited = 0.0;  // sum_{n>=2} w_n, kept apart so ln Z keeps its digits near T -> 0
    double tail_bound = 0.0;

    if (const std::size_t levels = well.model().levels; levels != 0) {
        gaps.reserve(levels);
        weights.reserve(levels);
        for (std::size_t n = 2; n <= levels; ++n) {
            const double g = detail::reduced_gap(c, alpha, n);
            gaps.push_back(g);
            weights.push_back(std::exp(-g));
            excited += weights.back();
        }
    } else {
        // Tail bounds: w_{N+1} / (1 - r) for the weights and w_{N+1} x_{N+1} / (1 - rho)
        // for the gap-weighted terms behind U and S, with rho = r x_{N+2} / x_{N+1}.
        // Both are compared against the excited-state part of the retained sums so
        // that U - E_1 and S, not only Z, are resolved to rel_tol.
        std::size_t n = 1;
        double excited_moment = 0.0;  // sum_{2..N} w_n x_n
        double next_gap = detail::reduced_gap(c, alpha, 2);
        for (;;) {
            const double w_next = std::exp(-next_gap);
            if (w_next == 0.0) break;
            const double after_gap = detail::reduced_gap(c, alpha, n + 2);
            const double ratio = std::exp(-(after_gap - next_gap));
            const double moment_ratio = ratio * (after_gap / next_gap);
            const double z_tail = ratio < 1.0 ? w_next / (1.0 - ratio) : HUGE_VAL;
            const double moment_tail =
                moment_ratio < 1.0 ? w_next * next_gap / (1.0 - moment_ratio) : HUGE_VAL;
            if (n >= 2 && z_tail <= rel_tol * excited && moment_tail <= rel_tol * excited_moment) {
                tail_bound = z_tail / (1.0 + excited);
                break;
            }
            if (n + 1 > SpectrumModel::max_levels)
                throw truncation_error("partition sum for " + detail::describe(state) +
                                       " needs more than 10^6 levels to reach rel_tol");
            ++n;
            gaps.push_back(next_gap);
            weights.push_back(w_next);
            excited += w_next;
            excited_moment += w_next * next_gap;
            next_gap = after_gap;
        }
    }

    EnsembleSummary out;
    out.n_cut = weights.size();
    out.tail_bound = tail_bound;
    const double sum = 1.0 + excited;
    const double log_sum = std::log1p(excited);
    out.log_partition_function = -c + log_sum;
    out.partition_function = std::exp(out.log_partition_function);

    out.occupations.resize(weights.size());
    double moment = 0.0;   // sum P_n n^alpha
    double entropy = 0.0;  // -sum P_n ln P_n
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double p = weights[i] / sum;
        out.occupations[i] = p;
        moment += p * std::pow(static_cast<double>(i + 1), alpha);
        if (p >= 1e-300) entropy += p * (gaps[i] + log_sum);
    }
    out.internal_energy = e1 * moment;
    out.entropy = entropy;
    out.free_energy = -state.temperature() * out.log_partition_function;
    return out;
}

inline double internal_energy(const ThermalState& state, double rel_tol = kDefaultRelTol) {
    return summarize(state, rel_tol).internal_energy;
}

inline double entropy(const ThermalState& state, double rel_tol = kDefaultRelTol) {
    return summarize(state, rel_tol).entropy;
}

inline double free_energy(const ThermalState& state, double rel_tol = kDefaultRelTol) {
    return summarize(state, rel_tol).free_energy;
}

}  // namespace fqse

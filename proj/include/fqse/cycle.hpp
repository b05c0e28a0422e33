#pragma once

// Four-stroke Stirling cycle on the fractional well:
//   A -> B  isothermal at T_h, (L_A, alpha_2) -> (L_B, alpha_1)
//   B -> C  isochoric, regenerator, T_h -> T_c
//   C -> D  isothermal at T_c, (L_B, alpha_1) -> (L_A, alpha_2)
//   D -> A  isochoric, regenerator, T_c -> T_h

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fqse/error.hpp"
#include "fqse/spectrum.hpp"
#include "fqse/thermo.hpp"

namespace fqse {

struct CycleParams {
    double width_a = 1.0;  ///< L_A = L_D
    double width_b = 1.0;  ///< L_B = L_C
    double alpha_1 = 2.0;  ///< at B and C
    double alpha_2 = 2.0;  ///< at A and D
    double t_hot = 4.0;
    double t_cold = 3.0;
    double mass = 1.0;
    SpectrumModel model = kReferenceModel;

    /// Throws std::invalid_argument on the first violated invariant.
    void validate() const {
        auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
        if (!(width_a > 0.0) || !std::isfinite(width_a)) fail("width_a must be positive");
        if (!(width_b > 0.0) || !std::isfinite(width_b)) fail("width_b must be positive");
        if (!(alpha_1 > 1.0 && alpha_1 <= 2.0)) fail("alpha_1 must lie in (1, 2]");
        if (!(alpha_2 > 1.0 && alpha_2 <= 2.0)) fail("alpha_2 must lie in (1, 2]");
        if (!(t_cold > 0.0) || !std::isfinite(t_hot)) fail("temperatures must be positive");
        if (!(t_hot > t_cold)) fail("t_hot must exceed t_cold");
        if (!(mass > 0.0) || !std::isfinite(mass)) fail("mass must be positive");
    }

    friend bool operator==(const CycleParams&, const CycleParams&) = default;
};

struct Corners {
    ThermalState a, b, c, d;
};

inline Corners corners(const CycleParams& p) {
    p.validate();
    const WellSpec wide_a(p.width_a, p.alpha_2, p.mass, p.model);
    const WellSpec wide_b(p.width_b, p.alpha_1, p.mass, p.model);
    return {ThermalState(wide_a, p.t_hot), ThermalState(wide_b, p.t_hot),
            ThermalState(wide_b, p.t_cold), ThermalState(wide_a, p.t_cold)};
}

inline double carnot_efficiency(const CycleParams& p) {
    p.validate();
    return 1.0 - p.t_cold / p.t_hot;
}

enum class Regime { engine, non_engine };

inline const char* to_string(Regime r) { return r == Regime::engine ? "engine" : "non_engine"; }

/// H(x) with H(0) = 0.
inline double heaviside(double x) noexcept { return x > 0.0 ? 1.0 : 0.0; }

struct CycleReport {
    double q_ab = 0.0;
    double q_bc = 0.0;
    double q_cd = 0.0;
    double q_da = 0.0;
    double work = 0.0;
    double q_r = 0.0;
    double q_h = 0.0;
    /// W / Q_h. NaN for a cycle with W == 0 and Q_h == 0 (coincident corners).
    double efficiency = 0.0;
    double carnot = 0.0;
    Regime regime = Regime::non_engine;
    std::array<double, 4> corner_entropies{};      ///< A, B, C, D
    std::array<double, 4> corner_energies{};       ///< A, B, C, D
    std::array<double, 4> corner_free_energies{};  ///< A, B, C, D
};

/// Stage heats, work, regenerator balance and efficiency of one cycle.
///
/// All four corners share rel_tol. Throws degenerate_cycle when |Q_h| <= 1e-15
/// while W != 0; ensemble errors propagate.
inline CycleReport evaluate(const CycleParams& p, double rel_tol = kDefaultRelTol) {
    const Corners cs = corners(p);
    const EnsembleSummary a = summarize(cs.a, rel_tol);
    const EnsembleSummary b = summarize(cs.b, rel_tol);
    const EnsembleSummary c = summarize(cs.c, rel_tol);
    const EnsembleSummary d = summarize(cs.d, rel_tol);

    CycleReport r;
    r.corner_entropies = {a.entropy, b.entropy, c.entropy, d.entropy};
    r.corner_energies = {a.internal_energy, b.internal_energy, c.internal_energy,
                         d.internal_energy};
    r.corner_free_energies = {a.free_energy, b.free_energy, c.free_energy, d.free_energy};

    r.q_ab = p.t_hot * (b.entropy - a.entropy);
    r.q_bc = c.internal_energy - b.internal_energy;
    r.q_cd = p.t_cold * (d.entropy - c.entropy);
    r.q_da = a.internal_energy - d.internal_energy;
    r.work = r.q_ab + r.q_bc + r.q_cd + r.q_da;
    r.q_r = r.q_bc + r.q_da;
    r.q_h = r.q_ab + heaviside(r.q_r) * r.q_r;
    r.carnot = 1.0 - p.t_cold / p.t_hot;
    r.regime = r.work > 0.0 ? Regime::engine : Regime::non_engine;

    if (std::abs(r.q_h) <= 1e-15) {
        if (r.work != 0.0)
            throw degenerate_cycle("hot-bath heat vanishes while net work is nonzero");
        r.efficiency = std::numeric_limits<double>::quiet_NaN();
    } else {
        r.efficiency = r.work / r.q_h;
    }
    return r;
}

}  // namespace fqse

#pragma once

// Energy levels of a particle confined to a 1-D infinite well whose kinetic
// term is |p|^alpha (fractional quantum mechanics). Natural units: hbar = k_B = 1.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace fqse {

/// How the well width enters the ground-state wavenumber.
enum class WidthConvention {
    full_period,  ///< k = 2 pi / L
    half_width,   ///< k = pi / (2 L), i.e. L is the half-width of the well
};

inline const char* to_string(WidthConvention c) {
    return c == WidthConvention::full_period ? "full-period" : "half-width";
}

/// Spectrum family plus an optional hard level count.
///
/// levels == 0 means the full infinite ladder; the ensemble sums it adaptively.
/// levels > 0 keeps exactly levels 1..levels, which defines a finite-level
/// working substance whose thermodynamics is summed exactly.
struct SpectrumModel {
    WidthConvention convention = WidthConvention::full_period;
    std::size_t levels = 0;

    static constexpr std::size_t max_levels = 1'000'000;

    friend bool operator==(const SpectrumModel&, const SpectrumModel&) = default;
};

/// Ten levels with the half-width convention. This is the model that the
/// published regeneration table was computed with; see README.
inline constexpr SpectrumModel kReferenceModel{WidthConvention::half_width, 10};

/// Literal closed form on the untruncated spectrum.
inline constexpr SpectrumModel kFullPeriodModel{WidthConvention::full_period, 0};

/// Width, fractional parameter and mass of one equilibrium configuration.
/// Validated on construction: width > 0, 1 < alpha <= 2, mass > 0.
class WellSpec {
public:
    WellSpec(double width, double alpha, double mass = 1.0, SpectrumModel model = {})
        : width_(width), alpha_(alpha), mass_(mass), model_(model) {
        if (!(width > 0.0) || !std::isfinite(width))
            throw std::invalid_argument("well width must be positive and finite, got " +
                                        std::to_string(width));
        if (!(alpha > 1.0 && alpha <= 2.0))
            throw std::invalid_argument("fractional parameter must lie in (1, 2], got " +
                                        std::to_string(alpha));
        if (!(mass > 0.0) || !std::isfinite(mass))
            throw std::invalid_argument("mass must be positive and finite, got " +
                                        std::to_string(mass));
        if (model.levels > SpectrumModel::max_levels)
            throw std::invalid_argument("level count exceeds the cap of 10^6");
    }

    double width() const noexcept { return width_; }
    double alpha() const noexcept { return alpha_; }
    double mass() const noexcept { return mass_; }
    const SpectrumModel& model() const noexcept { return model_; }

    friend bool operator==(const WellSpec&, const WellSpec&) = default;

private:
    double width_;
    double alpha_;
    double mass_;
    SpectrumModel model_;
};

/// D_alpha = (1 / 2m)^(alpha / 2).
inline double scale_coefficient(const WellSpec& spec) {
    return std::pow(1.0 / (2.0 * spec.mass()), spec.alpha() / 2.0);
}

/// Ground-state wavenumber of the well under its width convention.
inline double ground_wavenumber(const WellSpec& spec) {
    using std::numbers::pi;
    return spec.model().convention == WidthConvention::full_period ? 2.0 * pi / spec.width()
                                                                   : pi / (2.0 * spec.width());
}

/// E_1 = D_alpha k^alpha. All higher levels are E_1 n^alpha.
inline double ground_energy(const WellSpec& spec) {
    return scale_coefficient(spec) * std::pow(ground_wavenumber(spec), spec.alpha());
}

namespace detail {
inline void check_level_index(const WellSpec& spec, long long n, const char* what) {
    if (n < 1) throw std::domain_error(std::string(what) + " must be >= 1");
    const auto cap = spec.model().levels;
    if (cap != 0 && static_cast<unsigned long long>(n) > cap)
        throw std::domain_error(std::string(what) + " exceeds the model's level count " +
                                std::to_string(cap));
}
}  // namespace detail

/// E_n = D_alpha (k)^alpha n^alpha; n counts from 1.
inline double energy_level(const WellSpec& spec, long long n) {
    detail::check_level_index(spec, n, "level index");
    return ground_energy(spec) * std::pow(static_cast<double>(n), spec.alpha());
}

/// [E_1, ..., E_{n_max}], element-wise identical to energy_level.
inline std::vector<double> energy_levels(const WellSpec& spec, long long n_max) {
    detail::check_level_index(spec, n_max, "n_max");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n_max));
    const double e1 = ground_energy(spec);
    for (long long n = 1; n <= n_max; ++n)
        out.push_back(e1 * std::pow(static_cast<double>(n), spec.alpha()));
    return out;
}

}  // namespace fqse

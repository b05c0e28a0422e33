#pragma once

#include <array>

namespace fqse {

/// One row of the published perfect-regeneration table (T_h = 4, T_c = 3, m = 1).
struct RegenerationRow {
    double width_a;
    double width_b;
    double q_r_standard;  ///< Q_R at alpha_1 = alpha_2 = 2
    double alpha_1;       ///< tabulated pair with Q_R = 0
    double alpha_2;
};

inline constexpr std::array<RegenerationRow, 10> kRegenerationTable{{
    {0.6, 0.9, -0.1291, 1.245, 1.282},
    {0.6, 1.0, -0.1315, 1.279, 1.326},
    {0.8, 1.1, -0.01223, 1.311, 1.409},
    {0.8, 1.2, -0.01009, 1.382, 1.459},
    {1.0, 1.3, 0.005565, 1.439, 1.520},
    {1.0, 1.4, 0.008296, 1.502, 1.579},
    {1.2, 1.5, 0.008021, 1.517, 1.621},
    {1.2, 1.6, 0.01057, 1.565, 1.678},
    {1.4, 1.7, 0.007634, 1.607, 1.719},
    {1.4, 1.8, 0.009979, 1.660, 1.778},
}};

/// Tolerance on the alpha = 2 column.
inline constexpr double kStandardColumnTol = 5e-4;
/// Tolerance on |Q_R| at the tabulated pair (absorbs 4-digit rounding of alpha).
inline constexpr double kPairResidualTol = 5e-3;

}  // namespace fqse

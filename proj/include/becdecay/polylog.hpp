#pragma once

namespace becdecay {

/// Bose function g_n(z) = sum_{k>=1} z^k / k^n for the orders the model
/// needs: n in {1/2, 1, 3/2, 5/2, 3, 4}, z in [0, 1] (z < 1 when n <= 1).
///
/// Direct series for z <= 0.55; expansion about z = 1 in powers of
/// alpha = -ln z above that, so accuracy stays at machine precision all
/// the way to the z = 1 endpoint where the raw series is useless.
/// Throws std::domain_error outside the supported (n, z) domain.
double polylog(double order, double z);

// Frequently used endpoint values.
inline constexpr double kZeta12 = -1.4603545088095868;  // g_{1/2} diverges at 1; zeta(1/2) for reference
inline constexpr double kZeta32 = 2.6123753486854883;   // g_{3/2}(1)
inline constexpr double kZeta52 = 1.3414872572509172;   // g_{5/2}(1)
inline constexpr double kZeta3 = 1.2020569031595943;    // g_3(1)
inline constexpr double kZeta4 = 1.0823232337111382;    // g_4(1)

}  // namespace becdecay

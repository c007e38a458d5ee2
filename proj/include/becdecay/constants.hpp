#pragma once

namespace becdecay {

// CODATA 2018 exact values (SI). Fixed; not user-configurable.
struct PhysConstants {
  static constexpr double hbar = 1.054571817e-34;  // J s
  static constexpr double k_B = 1.380649e-23;      // J/K
};

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace becdecay

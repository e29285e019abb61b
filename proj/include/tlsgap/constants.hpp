#pragma once

namespace tlsgap {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Planck constant, exact SI value (J s).
inline constexpr double kPlanck = 6.62607015e-34;

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kRngAlgorithm = "splitmix64/v1";
inline constexpr const char* kIntegratorName = "dopri5-pi/v1";

} // namespace tlsgap

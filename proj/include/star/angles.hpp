#pragma once

#include <cmath>
#include <numbers>

namespace star {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kAngleTol = 1e-9;

/// Wraps an angle into the half-open interval (-pi, pi].
inline double normalize_angle(double theta) {
  double t = std::remainder(theta, 2.0 * kPi);
  if (t <= -kPi) t += 2.0 * kPi;
  return t;
}

/// Distance between two angles on the circle.
inline double angle_distance(double a, double b) {
  return std::abs(normalize_angle(a - b));
}

inline bool angles_equal(double a, double b, double tol = kAngleTol) {
  return angle_distance(a, b) <= tol;
}

enum class AngleClass { Identity, Pauli, CliffordHalf, Generic };

/// Cost class of a rotation angle. Identity and Pauli rotations are absorbed
/// into the tracked Clifford frame, half rotations get their resource state
/// for free, everything else runs the full repeat-until-success protocol.
inline AngleClass classify_angle(double theta) {
  const double t = normalize_angle(theta);
  if (std::abs(t) <= kAngleTol) return AngleClass::Identity;
  if (angles_equal(t, kPi)) return AngleClass::Pauli;
  if (angles_equal(t, kPi / 2) || angles_equal(t, -kPi / 2)) {
    return AngleClass::CliffordHalf;
  }
  return AngleClass::Generic;
}

/// Resource states |m_theta> for these angles are Pauli eigenstates; their
/// creation is deterministic and costs no clock cycle.
inline bool pauli_eigenstate_angle(double theta) {
  return classify_angle(theta) != AngleClass::Generic;
}

}  // namespace star

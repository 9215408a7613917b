#pragma once

#include <complex>
#include <cstdio>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace nlasim {

using complex_t = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Configuration rejected before any numerics ran (bad key, value out of range).
struct ConfigError : std::invalid_argument {
  explicit ConfigError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Numerics produced something outside the model's validity envelope.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Probability mass outside the photon-number cutoff exceeded tolerance.
struct TruncationError : NumericalError {
  explicit TruncationError(const std::string& msg) : NumericalError(msg) {}
};

namespace tol {
// Hermiticity drift allowed on any density matrix.
inline constexpr double hermitian = 1e-12;
// Most-negative eigenvalue allowed on states and POVM elements.
inline constexpr double psd = 1e-10;
// Probability mass that may be silently discarded at the cutoff.
inline constexpr double truncation = 1e-12;
// Trace distance from 1 accepted by operations requiring normalized states.
inline constexpr double normalized = 1e-9;
// Herald probability below this is reported as a degenerate run.
inline constexpr double degenerate_herald = 1e-300;
}  // namespace tol

// Hard cap on simultaneously represented modes; dimensions stay desk scale.
inline constexpr int max_modes = 6;

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
  return r;
}

// 12 significant digits, the serialization precision used across the project.
// Non-finite values render as "inf", "-inf", "nan".
inline std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace nlasim

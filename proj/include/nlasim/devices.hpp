#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "nlasim/common.hpp"
#include "nlasim/density_operator.hpp"
#include "nlasim/measurement.hpp"

namespace nlasim {

// Photon source that emits |1><1| with probability epsilon, vacuum otherwise.
struct SourceModel {
  double efficiency = 1.0;

  void validate() const {
    if (efficiency < 0.0 || efficiency > 1.0)
      throw ConfigError("source efficiency must be in [0, 1]");
  }
};

// Threshold or photon-number-resolving detector.
//
// Detection efficiency delta acts as loss in front of an ideal detector.
// Dark clicks come from a thermal field mixed into the detection path; its
// mean occupation nu is calibrated so that P(click | vacuum) equals
// dark_click_prob exactly, giving nu = d / (1 - d).
struct DetectorModel {
  double efficiency = 1.0;
  double dark_click_prob = 0.0;
  bool pnr = false;

  double thermal_mean() const { return dark_click_prob / (1.0 - dark_click_prob); }

  void validate() const {
    if (efficiency < 0.0 || efficiency > 1.0)
      throw ConfigError("detector efficiency must be in [0, 1]");
    if (dark_click_prob < 0.0 || dark_click_prob >= 1.0)
      throw ConfigError("dark click probability must be in [0, 1)");
  }
};

// Single-mode state emitted by an imperfect source:
// epsilon |1><1| + (1 - epsilon) |0><0|.
inline DensityOperator lossy_single_photon(const SourceModel& source, const FockBasis& basis) {
  source.validate();
  if (basis.num_modes() != 1)
    throw std::invalid_argument("lossy_single_photon: basis must be single mode");
  if (basis.photon_cutoff() < 1)
    throw std::invalid_argument("lossy_single_photon: cutoff below 1");
  Matrix m = Matrix::Zero(basis.dim(), basis.dim());
  m(0, 0) = 1.0 - source.efficiency;
  m(1, 1) = source.efficiency;
  return DensityOperator(basis, std::move(m));
}

// Thermal state with mean occupation nu: P(n) = nu^n / (1 + nu)^(n + 1).
// The distribution is truncated at the basis cutoff; the discarded tail
// (nu / (1 + nu))^(cutoff + 1) must stay below tail_tol.
inline DensityOperator thermal_state(double mean_occupation, const FockBasis& basis,
                                     double tail_tol = tol::truncation) {
  if (mean_occupation < 0.0)
    throw std::invalid_argument("thermal_state: mean occupation must be nonnegative");
  if (basis.num_modes() != 1)
    throw std::invalid_argument("thermal_state: basis must be single mode");
  const double ratio = mean_occupation / (1.0 + mean_occupation);
  const double tail = std::pow(ratio, basis.photon_cutoff() + 1);
  if (tail >= tail_tol)
    throw TruncationError("thermal_state: discarded tail " + std::to_string(tail) +
                          " at cutoff " + std::to_string(basis.photon_cutoff()));
  Matrix m = Matrix::Zero(basis.dim(), basis.dim());
  for (int n = 0; n <= basis.photon_cutoff(); ++n)
    m(n, n) = std::pow(ratio, n) / (1.0 + mean_occupation);
  return DensityOperator(basis, std::move(m));
}

// Effective POVM of one detector on the local space {|0>, ..., |cutoff>}.
//
// Composition: signal loss with transmissivity delta, admixture of the
// calibrated thermal field, then ideal detection. All elements are diagonal
// in photon number. Outcome labels:
//   threshold detector: "no_click", "click"
//   pnr detector:       "zero", "one", "two_plus"   (exactly 0 / 1 / >= 2)
// The set sums to the identity by construction.
inline std::vector<PovmElement> detection_map(const DetectorModel& det, const FockBasis& basis) {
  det.validate();
  if (basis.num_modes() != 1)
    throw std::invalid_argument("detection_map: basis must be single mode");

  // Thermal occupation probabilities at the calibrated mean nu = d/(1-d):
  // P(0) = 1/(1+nu) = 1-d and P(1) = nu/(1+nu)^2 = d(1-d), exactly. The
  // construction uses these two only; higher terms are absorbed by
  // complements, so no truncation enters here.
  const double p_th0 = 1.0 - det.dark_click_prob;
  const double p_th1 = det.dark_click_prob * (1.0 - det.dark_click_prob);

  const int dim = basis.photon_cutoff() + 1;
  const double delta = det.efficiency;
  Matrix identity = Matrix::Identity(dim, dim);

  // No photon seen: every signal photon is lost and the thermal field is empty.
  Matrix none = Matrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) none(n, n) = p_th0 * std::pow(1.0 - delta, n);

  std::vector<PovmElement> out;
  if (!det.pnr) {
    // Built click-first with the dark term split out, so the vacuum click
    // probability is the calibrated value bit-for-bit; the complement then
    // closes the pair exactly.
    Matrix click = Matrix::Zero(dim, dim);
    for (int n = 0; n < dim; ++n)
      click(n, n) = det.dark_click_prob + p_th0 * (1.0 - std::pow(1.0 - delta, n));
    out.emplace_back("no_click", identity - click);
    out.emplace_back("click", click);
    return out;
  }

  // Exactly one photon seen: one signal photon survives and the thermal field
  // is empty, or no signal photon survives and the thermal field holds one.
  Matrix one = Matrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) {
    const double one_signal = n >= 1 ? n * delta * std::pow(1.0 - delta, n - 1) : 0.0;
    one(n, n) = p_th0 * one_signal + p_th1 * std::pow(1.0 - delta, n);
  }
  out.emplace_back("zero", none);
  out.emplace_back("one", one);
  out.emplace_back("two_plus", identity - none - one);
  return out;
}

enum class HeraldPolicy { single_pattern, both_patterns };

inline std::string to_string(HeraldPolicy p) {
  return p == HeraldPolicy::single_pattern ? "single_pattern" : "both_patterns";
}

inline HeraldPolicy herald_policy_from_string(const std::string& name) {
  if (name == "single_pattern") return HeraldPolicy::single_pattern;
  if (name == "both_patterns") return HeraldPolicy::both_patterns;
  throw ConfigError("herald_policy must be one of: single_pattern, both_patterns (got '" +
                    name + "')");
}

// One accepted heralding outcome: which element fires on each station
// detector, and whether the surviving output mode needs the compensating
// pi phase flip before the branches are merged.
struct HeraldPattern {
  std::string first_outcome;   // detector watching the transmitted-signal port
  std::string second_outcome;  // detector watching the ancilla port
  bool phase_flip = false;
};

// Accepted one-photon heralding patterns.
//
// For a threshold detector "one photon" means click with the partner silent;
// for a pnr detector it means the exactly-one outcome with the partner at
// zero. Under both_patterns the mirrored pattern is also accepted and flagged
// for the feed-forward phase flip, which doubles the herald probability for
// symmetric detectors.
inline std::vector<HeraldPattern> herald_pattern_map(const DetectorModel& first,
                                                     const DetectorModel& second,
                                                     HeraldPolicy policy) {
  const std::string hit_1 = first.pnr ? "one" : "click";
  const std::string miss_1 = first.pnr ? "zero" : "no_click";
  const std::string hit_2 = second.pnr ? "one" : "click";
  const std::string miss_2 = second.pnr ? "zero" : "no_click";

  std::vector<HeraldPattern> patterns;
  patterns.push_back({hit_1, miss_2, false});
  if (policy == HeraldPolicy::both_patterns) patterns.push_back({miss_1, hit_2, true});
  return patterns;
}

}  // namespace nlasim

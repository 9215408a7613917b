#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nlasim/channels.hpp"
#include "nlasim/common.hpp"
#include "nlasim/density_operator.hpp"
#include "nlasim/devices.hpp"
#include "nlasim/measurement.hpp"
#include "nlasim/metrics.hpp"

namespace nlasim {

// Where the amplifier sits relative to the lossy channel. `direct` is the
// no-amplifier baseline: send the photon and hope.
enum class Scheme { end, middle, direct };

inline std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::end: return "end";
    case Scheme::middle: return "middle";
    default: return "direct";
  }
}

inline Scheme scheme_from_string(const std::string& name) {
  if (name == "end") return Scheme::end;
  if (name == "middle") return Scheme::middle;
  if (name == "direct") return Scheme::direct;
  throw ConfigError("scheme must be one of: end, middle, direct (got '" + name + "')");
}

// Full parameterization of one protocol run.
//
// Mode naming used throughout: Alice keeps a1 and launches a2 into the
// channel; Bob's amplifier ancilla is split between b1 (toward the heralding
// station) and b2 (the amplifier output Bob keeps). The heralding station
// interferes the arriving a2 with b1 on a 50:50 beam splitter and watches
// both output ports with herald_detector_1 (signal port) and
// herald_detector_2 (ancilla port). char_detector_* model the measurement
// apparatus on the surviving pair (a1, b2); only their efficiency enters, as
// loss ahead of ideal characterization.
struct ProtocolConfig {
  Scheme scheme = Scheme::end;
  double tau = 0.5;  // Alice's splitting: sqrt(tau)|10> + sqrt(1-tau)|01>
  double t = 0.5;    // amplifier beam-splitter setting; gain = sqrt(t/(1-t))
  double eta = 1.0;  // total channel transmissivity
  SourceModel source_alice{};
  SourceModel source_bob{};
  DetectorModel herald_detector_1{};
  DetectorModel herald_detector_2{};
  DetectorModel char_detector_1{};
  DetectorModel char_detector_2{};
  HeraldPolicy herald_policy = HeraldPolicy::both_patterns;
  int cutoff = 3;
  // Mode overlap of Alice's and Bob's photons at the heralding station;
  // 1 means perfect two-photon interference. Values below 1 switch the
  // simulation to a six-mode model with an extra spectral copy per port.
  double hom_visibility = 1.0;
  // When set, p additionally requires the surviving pair to hold a photon
  // after characterization loss: p -> p * (1 - pop_vac). Applies to the
  // amplified schemes only; the direct baseline's p already counts exactly
  // the photon-retention event.
  bool fold_char_into_p = false;
  // Reported F of the direct baseline (a fixed comparison value, the direct
  // scheme has no heralding to shape its one-photon sector).
  double direct_fidelity = 0.98;

  double amplitude_gain() const { return std::sqrt(t / (1.0 - t)); }

  void validate() const {
    if (!(tau > 0.0 && tau < 1.0))
      throw ConfigError("tau must be in the open interval (0, 1)");
    if (!(t > 0.0 && t < 1.0))
      throw ConfigError("t must be in the open interval (0, 1)");
    if (!(eta > 0.0 && eta <= 1.0)) throw ConfigError("eta must be in (0, 1]");
    if (cutoff < 2 || cutoff > 8) throw ConfigError("cutoff must be in [2, 8]");
    if (!(hom_visibility >= 0.0 && hom_visibility <= 1.0))
      throw ConfigError("hom_visibility must be in [0, 1]");
    if (hom_visibility < 1.0 && cutoff > 4)
      throw ConfigError("cutoff must be in [2, 4] when hom_visibility < 1 (six-mode model)");
    if (!(direct_fidelity >= 0.0 && direct_fidelity <= 1.0))
      throw ConfigError("direct_fidelity must be in [0, 1]");
    auto check = [](const char* field, auto&& fn) {
      try {
        fn();
      } catch (const ConfigError& e) {
        throw ConfigError(std::string(field) + ": " + e.what());
      }
    };
    check("eps1", [&] { source_alice.validate(); });
    check("eps2", [&] { source_bob.validate(); });
    check("herald detector 1", [&] { herald_detector_1.validate(); });
    check("herald detector 2", [&] { herald_detector_2.validate(); });
    check("characterization detector 1", [&] { char_detector_1.validate(); });
    check("characterization detector 2", [&] { char_detector_2.validate(); });
  }
};

// Outcome of one protocol run. p is the herald success probability; all other
// figures describe the normalized conditional state rho_out on (a1, b2).
// F compares the normalized one-photon sector of rho_out against the target
// sqrt(tau)|10> + sqrt(1-tau)|01>; F_full is the Uhlmann fidelity of the full
// state against the same target. X is the one-photon/vacuum population ratio
// (infinity when the vacuum population is exactly zero). On a degenerate run
// (herald probability below tol::degenerate_herald) rho_out is absent and all
// state metrics are NaN.
struct RunResult {
  double p = 0.0;
  std::optional<DensityOperator> rho_out;
  double F = std::numeric_limits<double>::quiet_NaN();
  double F_full = std::numeric_limits<double>::quiet_NaN();
  double X = std::numeric_limits<double>::quiet_NaN();
  double pop_vac = std::numeric_limits<double>::quiet_NaN();
  double pop_one = std::numeric_limits<double>::quiet_NaN();
  double pop_two = std::numeric_limits<double>::quiet_NaN();
  double t_used = std::numeric_limits<double>::quiet_NaN();
  std::string target_state_id;
  bool degenerate = false;
};

// One joint outcome of the two heralding detectors with its probability.
struct HeraldOutcome {
  std::string first_outcome;
  std::string second_outcome;
  double probability = 0.0;
};

// sqrt(tau)|10> + sqrt(1-tau)|01| on a two-mode basis.
inline DensityOperator target_pair_state(double tau, const FockBasis& basis) {
  if (basis.num_modes() != 2 || basis.photon_cutoff() < 1)
    throw std::invalid_argument("target_pair_state: need a two-mode basis with cutoff >= 1");
  Vector amp = Vector::Zero(basis.dim());
  amp(basis.index_of({1, 0})) = std::sqrt(tau);
  amp(basis.index_of({0, 1})) = std::sqrt(1.0 - tau);
  return DensityOperator::from_pure(basis, amp);
}

// Alice's source photon split over (a1, a2): ideal-source result is
// sqrt(tau)|10> + sqrt(1-tau)|01>, a source miss leaves vacuum.
inline DensityOperator prepare_alice_state(double tau, const SourceModel& source,
                                           int cutoff = 3) {
  if (!(tau >= 0.0 && tau <= 1.0))
    throw ConfigError("tau must be in [0, 1]");
  FockBasis one_mode(1, cutoff);
  DensityOperator rho =
      tensor_product(lossy_single_photon(source, one_mode), DensityOperator::vacuum(one_mode));
  return apply_beam_splitter(rho, 0, 1, tau);
}

// Bob's amplifier ancilla over (b1, b2): ideal-source result is
// sqrt(1-t)|10> + sqrt(t)|01>; b1 heads to the heralding station.
inline DensityOperator prepare_bob_ancilla(double t, const SourceModel& source,
                                           int cutoff = 3) {
  if (!(t >= 0.0 && t <= 1.0))
    throw ConfigError("t must be in [0, 1]");
  FockBasis one_mode(1, cutoff);
  DensityOperator rho =
      tensor_product(lossy_single_photon(source, one_mode), DensityOperator::vacuum(one_mode));
  return apply_beam_splitter(rho, 0, 1, 1.0 - t);
}

namespace detail {

// State just after the station interference, plus the mode group each herald
// detector watches. The groups are arranged so that measuring `watch` for
// detector 1 and then `watch` again (indices shift down by the traced-out
// group) lands on detector 2's ports, leaving exactly (a1, b2).
struct StationState {
  DensityOperator rho;
  std::vector<int> watch;
};

// Diagonal outcome weight per total photon count at the watched ports,
// read off the single-mode POVM element with the given label.
inline std::vector<double> outcome_table(const DetectorModel& det, const std::string& label,
                                         int cutoff) {
  const auto elements = detection_map(det, FockBasis(1, cutoff));
  for (const auto& e : elements)
    if (e.label == label) {
      std::vector<double> table(cutoff + 1);
      for (int n = 0; n <= cutoff; ++n)
        table[n] = std::clamp(e.matrix(n, n).real(), 0.0, 1.0);
      return table;
    }
  throw std::invalid_argument("unknown detector outcome label '" + label + "'");
}

inline std::vector<std::string> outcome_labels(const DetectorModel& det) {
  return det.pnr ? std::vector<std::string>{"zero", "one", "two_plus"}
                 : std::vector<std::string>{"no_click", "click"};
}

// Four-mode layout (a1, a2, b1, b2): both photons are fully indistinguishable
// at the station.
inline StationState station_state_four_mode(const ProtocolConfig& c) {
  DensityOperator rho = tensor_product(prepare_alice_state(c.tau, c.source_alice, c.cutoff),
                                       prepare_bob_ancilla(c.t, c.source_bob, c.cutoff));
  if (c.scheme == Scheme::end) {
    rho = apply_loss(rho, 1, c.eta);
  } else {
    const double leg = std::sqrt(c.eta);
    rho = apply_loss(rho, 1, leg);
    rho = apply_loss(rho, 2, leg);
  }
  // Station 50:50: the ancilla port b1 is oriented so the first herald
  // pattern needs no phase correction and the mirrored pattern needs a pi
  // flip on b2.
  rho = apply_beam_splitter(rho, 2, 1, 0.5);
  return {std::move(rho), {1}};
}

// Six-mode layout (a1, m1, u1, m2, u2, b2) for imperfect mode overlap:
// each station port carries a matched (m) and an unmatched (u) spectral
// copy; Alice's photon rides the matched copy, Bob's ancilla splits between
// them with amplitude v = sqrt(visibility) on the matched copy. The two
// copies interfere pairwise and each herald detector watches both copies of
// its port, summing photon counts.
inline StationState station_state_six_mode(const ProtocolConfig& c) {
  FockBasis one_mode(1, c.cutoff);
  FockBasis three_mode(3, c.cutoff);
  DensityOperator alice = tensor_product(prepare_alice_state(c.tau, c.source_alice, c.cutoff),
                                         DensityOperator::vacuum(one_mode));

  const double v = std::sqrt(c.hom_visibility);
  Vector amp = Vector::Zero(three_mode.dim());
  amp(three_mode.index_of({1, 0, 0})) = std::sqrt(1.0 - c.t) * v;
  amp(three_mode.index_of({0, 1, 0})) = std::sqrt(1.0 - c.t) * std::sqrt(1.0 - v * v);
  amp(three_mode.index_of({0, 0, 1})) = std::sqrt(c.t);
  Matrix bob_m =
      DensityOperator::from_pure(three_mode, amp, c.source_bob.efficiency).matrix();
  bob_m(0, 0) += 1.0 - c.source_bob.efficiency;
  DensityOperator bob(three_mode, std::move(bob_m));

  DensityOperator rho = tensor_product(alice, bob);
  if (c.scheme == Scheme::end) {
    rho = apply_loss(rho, 1, c.eta);
    rho = apply_loss(rho, 2, c.eta);
  } else {
    const double leg = std::sqrt(c.eta);
    for (int mode : {1, 2, 3, 4}) rho = apply_loss(rho, mode, leg);
  }
  rho = apply_beam_splitter(rho, 3, 1, 0.5);
  rho = apply_beam_splitter(rho, 4, 2, 0.5);
  return {std::move(rho), {1, 2}};
}

inline StationState station_state(const ProtocolConfig& c) {
  return c.hom_visibility >= 1.0 ? station_state_four_mode(c) : station_state_six_mode(c);
}

// Condition on one detector outcome at the watched ports; traces the ports
// out, so the returned state's trace is the joint probability so far.
inline std::pair<double, DensityOperator> herald_once(const DensityOperator& rho,
                                                      const std::vector<int>& watch,
                                                      const std::vector<double>& table) {
  return measure_diagonal(rho, watch, [&](const std::vector<int>& occ) {
    int total = 0;
    for (int n : occ) total += n;
    return table[total];
  });
}

inline std::string target_id(double tau) {
  return fmt12(std::sqrt(tau)) + "|10> + " + fmt12(std::sqrt(1.0 - tau)) + "|01>";
}

// Characterization loss, normalization and all state metrics, shared by the
// amplified schemes.
inline RunResult finish_run(const ProtocolConfig& c, double p_raw,
                            std::optional<DensityOperator> merged) {
  RunResult res;
  res.p = p_raw;
  res.t_used = c.t;
  res.target_state_id = target_id(c.tau);
  if (!merged.has_value() || p_raw < tol::degenerate_herald) {
    res.degenerate = true;
    return res;
  }

  DensityOperator rho = apply_loss(*merged, 0, c.char_detector_1.efficiency);
  rho = apply_loss(rho, 1, c.char_detector_2.efficiency);
  rho = rho.normalized();

  const SubspacePopulations pops = subspace_populations(rho);
  res.pop_vac = pops.vacuum;
  res.pop_one = pops.one_photon;
  res.pop_two = pops.two_photon;
  res.X = pops.vacuum > 0.0 ? pops.one_photon / pops.vacuum
                            : std::numeric_limits<double>::infinity();

  const DensityOperator target = target_pair_state(c.tau, rho.basis());
  res.F_full = fidelity(rho, target);

  // Projection onto the one-photon sector, renormalized.
  const FockBasis& basis = rho.basis();
  Matrix proj = rho.matrix();
  for (int r = 0; r < basis.dim(); ++r)
    for (int col = 0; col < basis.dim(); ++col)
      if (basis.total_photons(r) != 1 || basis.total_photons(col) != 1) proj(r, col) = 0.0;
  const double sector = proj.real().trace();
  if (sector > tol::degenerate_herald)
    res.F = fidelity(DensityOperator(basis, proj / sector), target);

  if (c.fold_char_into_p) res.p = p_raw * (1.0 - pops.vacuum);
  res.rho_out = std::move(rho);
  return res;
}

inline RunResult run_amplified(const ProtocolConfig& c) {
  const StationState st = station_state(c);
  const auto patterns =
      herald_pattern_map(c.herald_detector_1, c.herald_detector_2, c.herald_policy);

  double p_raw = 0.0;
  std::optional<DensityOperator> merged;
  for (const auto& pat : patterns) {
    const auto table1 = outcome_table(c.herald_detector_1, pat.first_outcome, c.cutoff);
    const auto table2 = outcome_table(c.herald_detector_2, pat.second_outcome, c.cutoff);
    auto first = herald_once(st.rho, st.watch, table1);
    auto second = herald_once(first.second, st.watch, table2);
    DensityOperator cond = std::move(second.second);  // (a1, b2)
    if (pat.phase_flip) cond = apply_phase_shift(cond, 1, std::numbers::pi);
    p_raw += second.first;
    merged = merged.has_value() ? (*merged + cond) : std::move(cond);
  }
  return finish_run(c, p_raw, std::move(merged));
}

// Direct baseline in closed form: the shared pair survives source, channel
// and characterization with probability h and is otherwise replaced by
// vacuum. p counts exactly the retention event.
inline RunResult run_direct(const ProtocolConfig& c) {
  const double h = c.source_alice.efficiency * c.eta * c.char_detector_2.efficiency;
  RunResult res;
  res.p = h;
  res.target_state_id = target_id(c.tau);
  if (h < tol::degenerate_herald) {
    res.degenerate = true;
    return res;
  }

  FockBasis basis(2, c.cutoff);
  const DensityOperator target = target_pair_state(c.tau, basis);
  Matrix m = h * target.matrix();
  m(0, 0) += 1.0 - h;
  DensityOperator rho(basis, std::move(m));

  const SubspacePopulations pops = subspace_populations(rho);
  res.pop_vac = pops.vacuum;
  res.pop_one = pops.one_photon;
  res.pop_two = pops.two_photon;
  res.X = pops.vacuum > 0.0 ? pops.one_photon / pops.vacuum
                            : std::numeric_limits<double>::infinity();
  res.F = c.direct_fidelity;
  res.F_full = fidelity(rho, target);
  res.rho_out = std::move(rho);
  return res;
}

}  // namespace detail

// Evaluate one full protocol configuration to its heralded conditional state
// and summary metrics.
inline RunResult run_protocol(const ProtocolConfig& config) {
  config.validate();
  if (config.scheme == Scheme::direct) return detail::run_direct(config);
  return detail::run_amplified(config);
}

// Joint probability of every herald-detector outcome pair (the accepted
// patterns are a subset). Sums to 1 over the complete set.
inline std::vector<HeraldOutcome> herald_pattern_probabilities(const ProtocolConfig& config) {
  config.validate();
  if (config.scheme == Scheme::direct)
    throw ConfigError("scheme: herald outcomes exist only for the end and middle schemes");

  const detail::StationState st = detail::station_state(config);
  std::vector<HeraldOutcome> out;
  for (const auto& label1 : detail::outcome_labels(config.herald_detector_1)) {
    const auto table1 = detail::outcome_table(config.herald_detector_1, label1, config.cutoff);
    const auto first = detail::herald_once(st.rho, st.watch, table1);
    for (const auto& label2 : detail::outcome_labels(config.herald_detector_2)) {
      const auto table2 = detail::outcome_table(config.herald_detector_2, label2, config.cutoff);
      const auto second = detail::herald_once(first.second, st.watch, table2);
      out.push_back({label1, label2, second.first});
    }
  }
  return out;
}

// The amplifier as a standalone gate on a single-mode input state confined to
// span{|0>, |1>}: ancilla photon split by t, 50:50 interference with the
// input, heralding on the accepted patterns. Returns the herald probability
// and the normalized output state. For ideal devices the one-photon/vacuum
// population ratio is multiplied by exactly t/(1-t).
inline std::pair<double, DensityOperator> scissors_gate_standalone(
    const DensityOperator& input, double t, const DetectorModel& detector_1,
    const DetectorModel& detector_2, HeraldPolicy policy) {
  const FockBasis& in_basis = input.basis();
  if (in_basis.num_modes() != 1)
    throw std::invalid_argument("scissors_gate_standalone: input must be a single-mode state");
  if (!(t > 0.0 && t < 1.0))
    throw ConfigError("t must be in the open interval (0, 1)");
  detector_1.validate();
  detector_2.validate();
  if (std::abs(input.trace() - 1.0) > tol::normalized)
    throw std::invalid_argument("scissors_gate_standalone: input must be normalized");
  double above_one = 0.0;
  for (int i = 0; i < in_basis.dim(); ++i)
    if (in_basis.total_photons(i) >= 2) above_one += input.matrix()(i, i).real();
  if (above_one > tol::normalized)
    throw std::invalid_argument(
        "scissors_gate_standalone: input must be confined to span{|0>, |1>}");

  // Two photons can meet at the station, so the working cutoff is at least 2.
  const int cutoff = std::max(in_basis.photon_cutoff(), 2);
  FockBasis work(1, cutoff);
  Matrix embedded = Matrix::Zero(work.dim(), work.dim());
  embedded.topLeftCorner(in_basis.dim(), in_basis.dim()) = input.matrix();
  DensityOperator signal(work, std::move(embedded));

  DensityOperator rho =
      tensor_product(signal, prepare_bob_ancilla(t, SourceModel{1.0}, cutoff));
  rho = apply_beam_splitter(rho, 1, 0, 0.5);  // (signal, b1, b2), ancilla onto signal port

  const auto elements1 = detection_map(detector_1, work);
  const auto elements2 = detection_map(detector_2, work);
  auto element = [](const std::vector<PovmElement>& set,
                    const std::string& label) -> const PovmElement& {
    for (const auto& e : set)
      if (e.label == label) return e;
    throw std::invalid_argument("unknown detector outcome label '" + label + "'");
  };

  double p = 0.0;
  std::optional<DensityOperator> merged;
  for (const auto& pat : herald_pattern_map(detector_1, detector_2, policy)) {
    auto first = measure_povm(rho, 0, element(elements1, pat.first_outcome));
    auto second = measure_povm(first.second, 0, element(elements2, pat.second_outcome));
    DensityOperator cond = std::move(second.second);  // (b2)
    if (pat.phase_flip) cond = apply_phase_shift(cond, 0, std::numbers::pi);
    p += second.first;
    merged = merged.has_value() ? (*merged + cond) : std::move(cond);
  }
  if (p < tol::degenerate_herald)
    throw NumericalError("scissors_gate_standalone: herald probability vanishes");
  return {p, merged->normalized()};
}

}  // namespace nlasim

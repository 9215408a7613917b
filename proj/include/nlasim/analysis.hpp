#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "nlasim/common.hpp"
#include "nlasim/protocols.hpp"

namespace nlasim {

// Gain setting that restores the target state exactly under ideal devices:
// t = tau/(eta + tau - tau*eta) with the amplifier at the channel end,
// t = tau with the amplifier at the midpoint.
inline double optimal_gain_setting(Scheme scheme, double tau, double eta) {
  if (!(tau > 0.0 && tau < 1.0))
    throw ConfigError("tau must be in the open interval (0, 1)");
  if (!(eta > 0.0 && eta <= 1.0)) throw ConfigError("eta must be in (0, 1]");
  switch (scheme) {
    case Scheme::end: return tau / (eta + tau - tau * eta);
    case Scheme::middle: return tau;
    default: throw ConfigError("scheme: the direct baseline has no gain setting");
  }
}

// Fiber model: eta = 10^(-loss_db_per_km * L / 10).
inline double eta_from_distance(double distance_km, double loss_db_per_km = 0.2) {
  if (distance_km < 0.0) throw ConfigError("distance_km must be nonnegative");
  if (loss_db_per_km <= 0.0) throw ConfigError("loss_db_per_km must be positive");
  return std::pow(10.0, -loss_db_per_km * distance_km / 10.0);
}

inline double distance_from_eta(double eta, double loss_db_per_km = 0.2) {
  if (!(eta > 0.0 && eta <= 1.0)) throw ConfigError("eta must be in (0, 1]");
  if (loss_db_per_km <= 0.0) throw ConfigError("loss_db_per_km must be positive");
  return -10.0 * std::log10(eta) / loss_db_per_km;
}

struct TuneResult {
  double t_star = 0.0;
  double f_star = 0.0;
  int iterations = 0;           // objective evaluations
  bool bracket_warning = false; // an interval endpoint beat the interior samples
};

// Maximize F over t in (0.001, 0.999) by golden-section search to an absolute
// t-tolerance of 1e-4. F(t) is empirically unimodal for this protocol family;
// if an endpoint beats the interior samples the search falls back to a
// 200-point grid scan with golden refinement around the best cell. The result
// never scores below the analytic gain setting.
inline TuneResult tune_gain_for_fidelity(const ProtocolConfig& base) {
  base.validate();
  if (base.scheme == Scheme::direct)
    throw ConfigError("scheme: the direct baseline has no gain to tune");

  TuneResult res;
  auto objective = [&](double t) {
    ProtocolConfig cfg = base;
    cfg.t = t;
    const RunResult r = run_protocol(cfg);
    ++res.iterations;
    return (r.degenerate || std::isnan(r.F)) ? -1.0 : r.F;
  };

  constexpr double lo = 0.001, hi = 0.999, tol_t = 1e-4;
  constexpr double invphi = 0.61803398874989484820;

  auto golden = [&](double a, double b) {
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = objective(c), fd = objective(d);
    while (b - a > tol_t) {
      if (fc >= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - invphi * (b - a);
        fc = objective(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + invphi * (b - a);
        fd = objective(d);
      }
    }
    const double mid = (a + b) / 2.0;
    return std::pair<double, double>{mid, objective(mid)};
  };

  const double f_lo = objective(lo), f_hi = objective(hi);
  const double c0 = hi - invphi * (hi - lo), d0 = lo + invphi * (hi - lo);
  const double f_c0 = objective(c0), f_d0 = objective(d0);
  res.bracket_warning = std::max(f_lo, f_hi) > std::max(f_c0, f_d0) + 1e-12;

  double t_star, f_star;
  if (!res.bracket_warning) {
    std::tie(t_star, f_star) = golden(lo, hi);
  } else {
    constexpr int grid_n = 200;
    int best = 0;
    double best_f = -2.0;
    for (int i = 0; i < grid_n; ++i) {
      const double t = lo + (hi - lo) * i / (grid_n - 1);
      const double f = objective(t);
      if (f > best_f) {
        best_f = f;
        best = i;
      }
    }
    const double step = (hi - lo) / (grid_n - 1);
    const double a = std::max(lo, lo + step * (best - 1));
    const double b = std::min(hi, lo + step * (best + 1));
    std::tie(t_star, f_star) = golden(a, b);
  }

  const double t_analytic = optimal_gain_setting(base.scheme, base.tau, base.eta);
  const double f_analytic = objective(t_analytic);
  if (f_analytic > f_star) {
    t_star = t_analytic;
    f_star = f_analytic;
  }
  res.t_star = t_star;
  res.f_star = f_star;
  return res;
}

// How the gain setting is chosen per sweep point.
enum class TMode { optimal, tuned, fixed_value };

inline std::string to_string(TMode m) {
  switch (m) {
    case TMode::optimal: return "optimal";
    case TMode::tuned: return "tuned";
    default: return "fixed";
  }
}

inline TMode t_mode_from_string(const std::string& name) {
  if (name == "optimal") return TMode::optimal;
  if (name == "tuned") return TMode::tuned;
  if (name == "fixed") return TMode::fixed_value;
  throw ConfigError("t_mode must be one of: optimal, tuned, fixed (got '" + name + "')");
}

struct SweepSpec {
  enum class Variable { eta, distance_km };
  Variable variable = Variable::eta;
  std::vector<double> grid;         // strictly increasing
  ProtocolConfig base;              // template; scheme/eta/t overwritten per row
  std::vector<Scheme> schemes;     // evaluated at every grid point, in order
  TMode t_mode = TMode::optimal;   // fixed_value keeps base.t
  double loss_db_per_km = 0.2;

  void validate() const {
    if (grid.empty()) throw ConfigError("grid must not be empty");
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
      if (!(grid[i] < grid[i + 1]))
        throw ConfigError("grid must be strictly increasing");
    for (double g : grid) {
      if (variable == Variable::eta && !(g > 0.0 && g <= 1.0))
        throw ConfigError("grid value " + fmt12(g) + " outside (0, 1] for variable eta");
      if (variable == Variable::distance_km && g < 0.0)
        throw ConfigError("grid value " + fmt12(g) + " is a negative distance_km");
    }
    if (schemes.empty()) throw ConfigError("scheme list must not be empty");
    if (loss_db_per_km <= 0.0) throw ConfigError("loss_db_per_km must be positive");
    base.validate();
  }
};

inline std::string to_string(SweepSpec::Variable v) {
  return v == SweepSpec::Variable::eta ? "eta" : "distance_km";
}

inline SweepSpec::Variable sweep_variable_from_string(const std::string& name) {
  if (name == "eta") return SweepSpec::Variable::eta;
  if (name == "distance_km") return SweepSpec::Variable::distance_km;
  throw ConfigError("variable must be one of: eta, distance_km (got '" + name + "')");
}

// One sweep row: the full parameter echo plus the run metrics. A failed or
// degenerate row keeps its echo columns, carries NaN metrics and a short
// explanation in `error`.
struct SweepRow {
  Scheme scheme = Scheme::end;
  double tau = std::numeric_limits<double>::quiet_NaN();
  double t = std::numeric_limits<double>::quiet_NaN();
  double eta = std::numeric_limits<double>::quiet_NaN();
  double distance_km = std::numeric_limits<double>::quiet_NaN();
  double eps1 = std::numeric_limits<double>::quiet_NaN();
  double eps2 = std::numeric_limits<double>::quiet_NaN();
  double delta1 = std::numeric_limits<double>::quiet_NaN();
  double delta2 = std::numeric_limits<double>::quiet_NaN();
  double dark_prob = std::numeric_limits<double>::quiet_NaN();
  bool pnr = false;
  HeraldPolicy herald_policy = HeraldPolicy::both_patterns;
  double p = std::numeric_limits<double>::quiet_NaN();
  double F = std::numeric_limits<double>::quiet_NaN();
  double F_full = std::numeric_limits<double>::quiet_NaN();
  double X = std::numeric_limits<double>::quiet_NaN();
  double pop_vac = std::numeric_limits<double>::quiet_NaN();
  double pop_one = std::numeric_limits<double>::quiet_NaN();
  double pop_two = std::numeric_limits<double>::quiet_NaN();
  std::string error;
};

namespace detail {

inline SweepRow evaluate_sweep_row(const SweepSpec& spec, double grid_value, Scheme scheme) {
  SweepRow row;
  row.scheme = scheme;
  row.tau = spec.base.tau;
  row.eps1 = spec.base.source_alice.efficiency;
  row.eps2 = spec.base.source_bob.efficiency;
  row.delta1 = spec.base.herald_detector_1.efficiency;
  row.delta2 = spec.base.char_detector_2.efficiency;
  row.dark_prob = spec.base.herald_detector_1.dark_click_prob;
  row.pnr = spec.base.herald_detector_1.pnr;
  row.herald_policy = spec.base.herald_policy;
  try {
    const double eta = spec.variable == SweepSpec::Variable::eta
                           ? grid_value
                           : eta_from_distance(grid_value, spec.loss_db_per_km);
    row.eta = eta;
    row.distance_km = spec.variable == SweepSpec::Variable::distance_km
                          ? grid_value
                          : distance_from_eta(eta, spec.loss_db_per_km);
    ProtocolConfig cfg = spec.base;
    cfg.scheme = scheme;
    cfg.eta = eta;
    if (scheme != Scheme::direct) {
      if (spec.t_mode == TMode::optimal)
        cfg.t = optimal_gain_setting(scheme, cfg.tau, eta);
      else if (spec.t_mode == TMode::tuned)
        cfg.t = tune_gain_for_fidelity(cfg).t_star;
      row.t = cfg.t;
    }
    const RunResult r = run_protocol(cfg);
    row.t = r.t_used;
    row.p = r.p;
    row.F = r.F;
    row.F_full = r.F_full;
    row.X = r.X;
    row.pop_vac = r.pop_vac;
    row.pop_one = r.pop_one;
    row.pop_two = r.pop_two;
    if (r.degenerate) row.error = "degenerate: herald probability below 1e-300";
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace detail

// Evaluate grid x schemes (grid-major). Rows are independent; with threads > 1
// they are computed on a fixed index stride and written to preallocated
// slots, so the result is identical for any thread count.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec, int threads = 1) {
  spec.validate();
  const int n = int(spec.grid.size() * spec.schemes.size());
  std::vector<SweepRow> rows(n);
  auto eval_slot = [&](int index) {
    const double g = spec.grid[index / spec.schemes.size()];
    const Scheme s = spec.schemes[index % spec.schemes.size()];
    rows[index] = detail::evaluate_sweep_row(spec, g, s);
  };

  threads = std::clamp(threads, 1, n);
  if (threads == 1) {
    for (int i = 0; i < n; ++i) eval_slot(i);
    return rows;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int k = 0; k < threads; ++k)
    pool.emplace_back([&, k] {
      for (int i = k; i < n; i += threads) eval_slot(i);
    });
  for (auto& th : pool) th.join();
  return rows;
}

struct FitReport {
  double exponent = 0.0;
  double r_squared = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

// Least-squares slope of log p versus log eta over rows with eta in [lo, hi].
inline FitReport fit_scaling_exponent(const std::vector<SweepRow>& rows, double lo, double hi) {
  if (!(lo > 0.0 && lo < hi))
    throw ConfigError("fit range must satisfy 0 < lo < hi");
  std::vector<double> xs, ys;
  for (const SweepRow& row : rows) {
    if (!row.error.empty() || row.eta < lo || row.eta > hi) continue;
    if (!(row.p > 0.0))
      throw NumericalError("scaling fit requires positive p (eta=" + fmt12(row.eta) + ")");
    xs.push_back(std::log(row.eta));
    ys.push_back(std::log(row.p));
  }
  if (xs.size() < 4)
    throw ConfigError("scaling fit needs at least 4 rows inside the range");

  const double n = double(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx < 1e-30) throw ConfigError("scaling fit needs at least two distinct eta values");

  FitReport report;
  report.exponent = sxy / sxx;
  report.r_squared = syy < 1e-30 ? 1.0 : (sxy * sxy) / (sxx * syy);
  report.lo = lo;
  report.hi = hi;
  return report;
}

// Trajectory-sampling estimate of p and X with binomial standard errors.
struct McEstimate {
  double p_hat = 0.0;
  double p_se = 0.0;
  double x_hat = std::numeric_limits<double>::quiet_NaN();
  double x_se = std::numeric_limits<double>::quiet_NaN();
  long long shots = 0;
  unsigned long long seed = 0;
  long long herald_count = 0;
  long long vac_count = 0;
  long long one_count = 0;
  long long two_count = 0;
};

// Independent stochastic check of run_protocol: photons are routed as
// classical trajectories, with two-photon interference at the 50:50 station
// injected as an explicit bunching rule (both photons exit the same port,
// each side with probability 1/2; with mode overlap below 1 the photons act
// distinguishable with probability 1 - visibility). Phases never enter, which
// is exact for p and for photon-number populations.
inline McEstimate monte_carlo_oracle(const ProtocolConfig& config, long long shots,
                                     unsigned long long seed = 1) {
  config.validate();
  if (shots < 1) throw ConfigError("shots must be at least 1");

  McEstimate est;
  est.shots = shots;
  est.seed = seed;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  auto chance = [&](double prob) { return uni(rng) < prob; };

  if (config.scheme == Scheme::direct) {
    long long retained = 0;
    for (long long s = 0; s < shots; ++s)
      if (chance(config.source_alice.efficiency) && chance(config.eta) &&
          chance(config.char_detector_2.efficiency))
        ++retained;
    est.herald_count = shots;
    est.one_count = retained;
    est.vac_count = shots - retained;
    est.p_hat = double(retained) / double(shots);
  } else {
    // Detector: each arriving photon is seen with probability delta; thermal
    // dark photons arrive as a geometric cascade with continue-probability d.
    auto detect = [&](int photons, const DetectorModel& det) {
      int seen = 0;
      for (int i = 0; i < photons; ++i)
        if (chance(det.efficiency)) ++seen;
      while (chance(det.dark_click_prob)) ++seen;
      return seen;
    };
    auto label = [](int seen, const DetectorModel& det) -> std::string {
      if (det.pnr) return seen == 0 ? "zero" : (seen == 1 ? "one" : "two_plus");
      return seen == 0 ? "no_click" : "click";
    };
    const auto patterns = herald_pattern_map(config.herald_detector_1,
                                             config.herald_detector_2, config.herald_policy);

    long long retained_and_heralded = 0;
    for (long long s = 0; s < shots; ++s) {
      bool photon_a1 = false, photon_a2 = false, photon_b1 = false, photon_b2 = false;
      if (chance(config.source_alice.efficiency)) {
        if (chance(config.tau))
          photon_a1 = true;
        else
          photon_a2 = true;
      }
      if (chance(config.source_bob.efficiency)) {
        if (chance(1.0 - config.t))
          photon_b1 = true;
        else
          photon_b2 = true;
      }
      if (config.scheme == Scheme::end) {
        if (photon_a2 && !chance(config.eta)) photon_a2 = false;
      } else {
        const double leg = std::sqrt(config.eta);
        if (photon_a2 && !chance(leg)) photon_a2 = false;
        if (photon_b1 && !chance(leg)) photon_b1 = false;
      }

      int port1 = 0, port2 = 0;
      const int arriving = int(photon_a2) + int(photon_b1);
      if (arriving == 1) {
        (chance(0.5) ? port1 : port2) = 1;
      } else if (arriving == 2) {
        if (chance(config.hom_visibility)) {
          (chance(0.5) ? port1 : port2) = 2;  // bunched
        } else {
          for (int i = 0; i < 2; ++i) chance(0.5) ? ++port1 : ++port2;
        }
      }

      const std::string l1 = label(detect(port1, config.herald_detector_1),
                                   config.herald_detector_1);
      const std::string l2 = label(detect(port2, config.herald_detector_2),
                                   config.herald_detector_2);
      bool heralded = false;
      for (const auto& pat : patterns)
        if (pat.first_outcome == l1 && pat.second_outcome == l2) {
          heralded = true;
          break;
        }
      if (!heralded) continue;

      ++est.herald_count;
      int out = 0;
      if (photon_a1 && chance(config.char_detector_1.efficiency)) ++out;
      if (photon_b2 && chance(config.char_detector_2.efficiency)) ++out;
      if (out == 0)
        ++est.vac_count;
      else if (out == 1)
        ++est.one_count;
      else
        ++est.two_count;
      if (out > 0) ++retained_and_heralded;
    }
    est.p_hat = double(config.fold_char_into_p ? retained_and_heralded : est.herald_count) /
                double(shots);
  }

  est.p_se = std::sqrt(std::max(est.p_hat * (1.0 - est.p_hat), 0.0) / double(shots));
  if (est.vac_count > 0) {
    est.x_hat = double(est.one_count) / double(est.vac_count);
    if (est.one_count > 0)
      est.x_se = est.x_hat * std::sqrt(1.0 / double(est.one_count) + 1.0 / double(est.vac_count));
  } else if (est.one_count > 0) {
    est.x_hat = std::numeric_limits<double>::infinity();
  }
  return est;
}

struct CrossoverReport {
  bool found = false;
  double distance_km = std::numeric_limits<double>::quiet_NaN();
  double p_middle = std::numeric_limits<double>::quiet_NaN();
  double p_direct = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;  // bisection steps
  std::string message;
};

// Distance at which the midpoint-amplified p first exceeds the direct
// baseline's p: coarse scan of [lo_km, hi_km] for a sign change of
// p_middle - p_direct (required negative at lo_km), then bisection to tol_km.
inline CrossoverReport find_crossover(const ProtocolConfig& base, TMode t_mode = TMode::optimal,
                                      double lo_km = 1.0, double hi_km = 500.0,
                                      double tol_km = 0.01, double loss_db_per_km = 0.2) {
  base.validate();
  if (!(lo_km >= 0.0 && lo_km < hi_km))
    throw ConfigError("crossover scan window must satisfy 0 <= lo_km < hi_km");
  if (tol_km <= 0.0) throw ConfigError("crossover tolerance must be positive");

  auto p_of = [&](Scheme scheme, double distance) {
    ProtocolConfig cfg = base;
    cfg.scheme = scheme;
    cfg.eta = eta_from_distance(distance, loss_db_per_km);
    if (scheme != Scheme::direct) {
      if (t_mode == TMode::optimal)
        cfg.t = optimal_gain_setting(scheme, cfg.tau, cfg.eta);
      else if (t_mode == TMode::tuned)
        cfg.t = tune_gain_for_fidelity(cfg).t_star;
    }
    return run_protocol(cfg).p;
  };
  auto gap = [&](double distance) {
    return p_of(Scheme::middle, distance) - p_of(Scheme::direct, distance);
  };

  CrossoverReport report;
  if (gap(lo_km) >= 0.0) {
    report.message = "the amplified scheme already matches or beats direct transmission at " +
                     fmt12(lo_km) + " km";
    return report;
  }

  constexpr int scan_cells = 256;
  double lo = lo_km, hi = hi_km;
  bool bracketed = false;
  for (int k = 1; k <= scan_cells; ++k) {
    const double x = lo_km + (hi_km - lo_km) * k / scan_cells;
    if (gap(x) >= 0.0) {
      lo = lo_km + (hi_km - lo_km) * (k - 1) / scan_cells;
      hi = x;
      bracketed = true;
      break;
    }
  }
  if (!bracketed) {
    report.message = "no crossover inside the scan window [" + fmt12(lo_km) + ", " +
                     fmt12(hi_km) + "] km";
    return report;
  }

  while (hi - lo > tol_km) {
    const double mid = (lo + hi) / 2.0;
    (gap(mid) >= 0.0 ? hi : lo) = mid;
    ++report.iterations;
  }
  report.found = true;
  report.distance_km = (lo + hi) / 2.0;
  report.p_middle = p_of(Scheme::middle, report.distance_km);
  report.p_direct = p_of(Scheme::direct, report.distance_km);
  return report;
}

}  // namespace nlasim

#include "mipp/validate.hpp"

#include "mipp/bessel.hpp"
#include "mipp/csv.hpp"
#include "mipp/scale.hpp"
#include "mipp/sim.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

namespace mipp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class Suite {
 public:
  template <class F>
  void check(const std::string& name, double threshold, F&& measure) {
    double measured = kNaN;
    try {
      measured = measure();
    } catch (const std::exception&) {
      measured = kNaN;
    }
    rows_.push_back({name, measured, threshold, measured <= threshold});
  }

  std::vector<CheckResult> take() { return std::move(rows_); }

 private:
  std::vector<CheckResult> rows_;
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// |estimate - expected| in standard errors; exact agreement counts as 0.
double z_score(const McMean& m, double expected) {
  const double diff = std::abs(m.mean - expected);
  if (diff == 0.0) return 0.0;
  return m.std_error > 0.0 ? diff / m.std_error : std::numeric_limits<double>::infinity();
}

double total_variation(const std::vector<std::int64_t>& draws, const Pmf& p) {
  std::map<std::int64_t, double> counts;
  for (auto d : draws) counts[d] += 1.0;
  const double n = static_cast<double>(draws.size());
  double tv = 0.0;
  double covered = 0.0;
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    const auto it = counts.find(k);
    const double emp = it == counts.end() ? 0.0 : it->second / n;
    tv += std::abs(emp - p.masses[k]);
    covered += emp;
  }
  tv += (1.0 - covered) + p.tail_bound;
  return 0.5 * tv;
}

double pmf_moment(const Pmf& p, int order, double center) {
  long double s = 0.0L;
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    s += p.masses[k] * std::pow(static_cast<double>(k) - center, order);
  }
  return static_cast<double>(s);
}

constexpr double kLambdas[] = {0.5, 1.0, 2.0};
constexpr double kTimes[] = {0.5, 1.0, 2.0};

void dist_checks(Suite& s, const RunConfig& cfg) {
  s.check("dist.pmf_normalization", 1e-12, [] {
    double worst = 0.0;
    for (int n = 1; n <= 4; ++n)
      for (double lam : kLambdas)
        for (double t : kTimes) {
          const Pmf p = pmf({lam, n}, t, 1e-12);
          worst = std::max(worst, std::abs(p.total() + p.tail_bound - 1.0));
        }
    return worst;
  });
  s.check("dist.pmf_mean", 1e-6, [] {
    double worst = 0.0;
    for (int n = 1; n <= 4; ++n)
      for (double lam : kLambdas)
        for (double t : kTimes) {
          const Pmf p = pmf({lam, n}, t, 1e-12);
          worst = std::max(worst, rel(pmf_moment(p, 1, 0.0), std::pow(lam, n) * t));
        }
    return worst;
  });
  s.check("dist.pmf_variance", 1e-6, [] {
    double worst = 0.0;
    for (int n = 1; n <= 4; ++n)
      for (double lam : kLambdas)
        for (double t : kTimes) {
          const Pmf p = pmf({lam, n}, t, 1e-12);
          const double mean = pmf_moment(p, 1, 0.0);
          worst = std::max(worst, rel(pmf_moment(p, 2, mean), moments_closed({lam, n}, t).variance));
        }
    return worst;
  });
  s.check("dist.zero_state_vs_q_sequence", 1e-10, [] {
    double worst = 0.0;
    for (double lam : kLambdas) {
      const Eigen::VectorXd q = q_sequence(lam, 4);
      for (int m = 1; m <= 4; ++m) {
        worst = std::max(worst, std::abs(pmf({lam, m}, 1.0, 1e-12)[0] - (1.0 - q[m - 1])));
      }
    }
    return worst;
  });
  s.check("dist.q_sequence_shape", 0.0, [] {
    double violations = 0.0;
    for (double lam : {0.1, 0.5, 1.0, 2.0, 5.0}) {
      const Eigen::VectorXd q = q_sequence(lam, 20);
      if (q[0] != -std::expm1(-lam)) violations += 1.0;
      for (Eigen::Index j = 0; j < q.size(); ++j) {
        if (!(q[j] > 0.0 && q[j] < 1.0)) violations += 1.0;
        if (j > 0 && q[j] != -std::expm1(-lam * q[j - 1])) violations += 1.0;
        if (lam <= 1.0 && j > 0 && !(q[j] < q[j - 1])) violations += 1.0;
      }
    }
    return violations;
  });
  s.check("dist.sojourn_rate_n3", 1e-12, [] {
    return std::abs(sojourn_rate({1.0, 3}) - (-std::expm1(std::expm1(-1.0))));
  });
  s.check("dist.char_exponent_example", 1e-14, [] {
    return rel(char_exponent({1.0, 2}, std::numbers::ln2), std::numbers::e - 1.0);
  });
  s.check("dist.exponent_consistency", 1e-8, [] {
    double worst = 0.0;
    for (int n = 1; n <= 3; ++n)
      for (double lam : kLambdas)
        for (double theta : {-0.5, -2.0}) {
          const Pmf p = pmf({lam, n}, 1.0, 1e-12);
          long double sum = 0.0L;
          for (Eigen::Index k = 0; k < p.size(); ++k) sum += p.masses[k] * std::exp(theta * k);
          worst = std::max(worst, std::abs(static_cast<double>(sum) -
                                           std::exp(char_exponent({lam, n}, theta))));
        }
    return worst;
  });
  s.check("dist.tilted_exponent_at_zero", 0.0, [] {
    double worst = 0.0;
    for (double theta : {-1.0, 0.3, 1.0}) {
      worst = std::max(worst, std::abs(tilted_char_exponent({1.0, 2}, theta, 0.0)));
    }
    return worst;
  });
  s.check("dist.tilted_exponent_shift", 1e-13, [] {
    double worst = 0.0;
    for (double theta : {-1.0, 0.3})
      for (double z : {-0.5, 0.2}) {
        const MippParams p{1.0, 3};
        worst = std::max(worst, std::abs(tilted_char_exponent(p, theta, z) -
                                         (char_exponent(p, z + theta) - char_exponent(p, theta))));
      }
    return worst;
  });
  s.check("dist.levy_tilt_entrywise", 1e-12, [] {
    double worst = 0.0;
    const MippParams p{1.0, 2};
    const LevyMeasure base = levy_measure(p, 0.0, 40);
    for (double theta : {-1.0, 0.3}) {
      const LevyMeasure tilted = levy_measure(p, theta, 40);
      for (std::size_t k = 0; k < base.masses.size(); ++k) {
        const double expected = std::exp(static_cast<double>(k) * theta) * base.masses[k].mass;
        if (expected > 0.0) worst = std::max(worst, rel(tilted.masses[k].mass, expected));
      }
    }
    return worst;
  });
  s.check("dist.levy_jump_rate", 1e-10, [] {
    double worst = 0.0;
    for (int n = 2; n <= 3; ++n)
      for (double lam : kLambdas) {
        const LevyMeasure nu = levy_measure({lam, n}, 0.0, 80);
        worst = std::max(worst, std::abs(nu.jump_rate() - sojourn_rate({lam, n})) - nu.tail);
      }
    return std::max(worst, 0.0);
  });
  s.check("dist.levy_zero_atom", 1e-15, [] {
    double worst = 0.0;
    for (double lam : kLambdas) {
      const LevyMeasure nu = levy_measure({lam, 2}, 0.0, 40);
      if (nu.masses[0].is_jump) return 1.0;
      worst = std::max(worst, rel(nu.masses[0].mass, lam * std::exp(-lam)));
    }
    return worst;
  });
  s.check("dist.first_jump_corollary", 1e-12, [] {
    double worst = 0.0;
    for (double lam : kLambdas) {
      const Pmf f = first_jump_pmf({lam, 2}, 1e-14);
      if (f.masses[0] != 0.0) return 1.0;
      double log_fact = 0.0;
      for (int k = 1; k < 15; ++k) {
        log_fact += std::log(static_cast<double>(k));
        const double expected = std::exp(k * std::log(lam) - log_fact - lam) / -std::expm1(-lam);
        worst = std::max(worst, std::abs(f[k] - expected));
      }
      worst = std::max(worst, std::abs(f.total() + f.tail_bound - 1.0));
    }
    return worst;
  });
  s.check("dist.mgf_marginal", 4.0 * DBL_EPSILON, [] {
    double worst = 0.0;
    for (int n = 2; n <= 3; ++n) {
      const double rate = sojourn_rate({1.0, n});
      for (double s1 : {-1.0, -0.5, 0.0, 0.25}) {
        worst = std::max(worst, rel(joint_mgf_first_jump({1.0, n}, s1, 0.0), rate / (rate - s1)));
      }
    }
    return worst;
  });
  s.check("dist.moments_unit_lambda_example", 1e-14, [] {
    const MomentSet m = moments_closed({1.0, 2}, 1.0);
    return std::max({rel(m.mean, 1.0), rel(m.variance, 2.0),
                     rel(m.skewness, 5.0 / (2.0 * std::numbers::sqrt2))});
  });
  s.check("dist.moments_branch_continuity", 1e-3, [] {
    const MomentSet at = moments_closed({1.0, 2}, 1.0);
    double worst = 0.0;
    for (double lam : {1.0 - 1e-5, 1.0 + 1e-5}) {
      const MomentSet m = moments_closed({lam, 2}, 1.0);
      worst = std::max({worst, rel(m.mean, at.mean), rel(m.variance, at.variance),
                        rel(m.skewness, at.skewness), rel(m.kurtosis, at.kurtosis)});
    }
    return worst;
  });
  s.check("dist.moments_vs_pmf", 1e-6, [] {
    double worst = 0.0;
    for (int n = 1; n <= 3; ++n)
      for (double lam : kLambdas) {
        const Pmf p = pmf({lam, n}, 1.0, 1e-13);
        const MomentSet m = moments_closed({lam, n}, 1.0);
        const double mean = pmf_moment(p, 1, 0.0);
        const double var = pmf_moment(p, 2, mean);
        const double sd = std::sqrt(var);
        worst = std::max({worst, rel(pmf_moment(p, 3, mean) / (var * sd), m.skewness),
                          rel(pmf_moment(p, 4, mean) / (var * var), m.kurtosis)});
      }
    return worst;
  });
  s.check("dist.kurtosis_bound", 0.0, [] {
    double worst = 0.0;
    for (int n = 1; n <= 6; ++n)
      for (double lam : {0.3, 0.5, 1.0, 1.5, 2.0})
        for (double t : kTimes) {
          const MomentSet m = moments_closed({lam, n}, t);
          worst = std::max({worst, -(m.kurtosis - m.skewness * m.skewness - 1.0), -m.variance});
        }
    return worst;
  });
  s.check("dist.bell_consistency", 1e-8, [] {
    const MippParams p{0.5, 2};
    const MomentSet m = moments_closed(p, 1.0);
    const double mu = m.mean;
    const double v = m.variance;
    const double c3 = m.skewness * v * std::sqrt(v);
    const double c4 = m.kurtosis * v * v;
    const double raw[] = {1.0, mu, v + mu * mu, c3 + 3.0 * mu * v + mu * mu * mu,
                          c4 + 4.0 * mu * c3 + 6.0 * mu * mu * v + mu * mu * mu * mu};
    double worst = 0.0;
    for (int k = 0; k <= 4; ++k) worst = std::max(worst, rel(moment_bell(p, 1.0, k), raw[k]));
    return worst;
  });
  s.check("dist.skew_kurt_limits_n40", 1e-6, [] {
    const auto lim = skew_kurt_limits(2.0, 1.0);
    if (!lim) return 1.0;
    const MomentSet m = moments_closed({2.0, 40}, 1.0);
    return std::max(rel(m.skewness, lim->skewness), rel(m.kurtosis, lim->kurtosis));
  });
  s.check("dist.skew_kurt_divergence_below_one", 0.0, [] {
    return skew_kurt_limits(0.5, 1.0).has_value() ? 1.0 : 0.0;
  });
  s.check("dist.governing_residual", 1e-3, [] {
    double worst = 0.0;
    for (int k = 0; k <= 10; ++k) worst = std::max(worst, governing_residual({1.0, 2}, 1.0, k, 1e-4));
    return worst;
  });
  // log2 of the residual ratio when dt doubles; 2 for a second-order method.
  s.check("dist.governing_order", 1.0, [] {
    double worst = 0.0;
    for (int k = 0; k <= 10; ++k) {
      const double r1 = governing_residual({1.0, 2}, 1.0, k, 1e-4);
      const double r2 = governing_residual({1.0, 2}, 1.0, k, 2e-4);
      worst = std::max(worst, std::abs(std::log2(r2 / r1) - 2.0));
    }
    return worst;
  });
  (void)cfg;
}

void sim_checks(Suite& s, const RunConfig& cfg) {
  const std::int64_t n_paths = cfg.paths;
  const SimOptions opts{cfg.threads};
  std::uint64_t salt = 0;
  const auto next_seed = [&] { return cfg.seed + 0x9E3779B97F4A7C15ULL * ++salt; };

  const auto draw_many = [&](std::uint64_t seed, auto&& draw) {
    std::vector<std::int64_t> out(static_cast<std::size_t>(n_paths));
    parallel_for_paths(
        n_paths,
        [&](std::int64_t i) {
          CounterStream rng({seed, static_cast<std::uint64_t>(i)});
          out[static_cast<std::size_t>(i)] = draw(rng);
        },
        opts);
    return out;
  };

  {
    const auto seed = next_seed();
    s.check("sim.sample_v1_poisson_tv", 0.01, [&] {
      const auto draws = draw_many(seed, [](CounterStream& r) { return sample_v1(1.0, 1, r); });
      return total_variation(draws, pmf({1.0, 1}, 1.0, 1e-13));
    });
  }
  {
    const auto seed = next_seed();
    s.check("sim.sample_v1_depth2_zero_and_mean", 4.0, [&] {
      const auto draws = draw_many(seed, [](CounterStream& r) { return sample_v1(1.0, 2, r); });
      std::vector<double> zero, value;
      for (auto d : draws) {
        zero.push_back(d == 0 ? 1.0 : 0.0);
        value.push_back(static_cast<double>(d));
      }
      return std::max(z_score(summarize(zero), 1.0 - q_sequence(1.0, 2)[1]),
                      z_score(summarize(value), 1.0));
    });
  }
  for (int n = 1; n <= 3; ++n)
    for (double lam : {0.5, 1.0}) {
      const auto seed = next_seed();
      s.check("sim.mipp_pmf_tv_n" + std::to_string(n) + "_lambda" + csv_number(lam), 0.01, [&] {
        const auto draws = draw_many(seed, [&](CounterStream& r) {
          return simulate_mipp({lam, n}, 1.0, r).terminal_value();
        });
        return total_variation(draws, pmf({lam, n}, 1.0, 1e-13));
      });
    }
  {
    const auto seed = next_seed();
    s.check("sim.sojourn_mean_and_variance", 4.0, [&] {
      const MippParams p{1.0, 3};
      const double rate = sojourn_rate(p);
      CounterStream rng({seed, 0});
      const Path path = simulate_mipp(p, static_cast<double>(n_paths) / rate, rng);
      std::vector<double> gaps;
      double prev = 0.0;
      for (double tj : path.jump_times) {
        gaps.push_back(tj - prev);
        prev = tj;
      }
      const McMean m = summarize(gaps);
      const double n = static_cast<double>(gaps.size());
      double ss = 0.0;
      for (double g : gaps) ss += (g - m.mean) * (g - m.mean);
      const double var = ss / (n - 1.0);
      // sd of the sample variance of Exp(rate): sqrt(8 / n) / rate^2
      const double var_se = std::sqrt(8.0 / n) / (rate * rate);
      return std::max(z_score(m, 1.0 / rate), std::abs(var - 1.0 / (rate * rate)) / var_se);
    });
  }
  for (int n = 2; n <= 3; ++n) {
    const auto seed = next_seed();
    s.check("sim.first_jump_tv_n" + std::to_string(n), 0.01, [&] {
      const auto draws = draw_many(seed, [&](CounterStream& r) {
        return simulate_first_jump({1.0, n}, r).size;
      });
      return total_variation(draws, first_jump_pmf({1.0, n}, 1e-13));
    });
  }
  {
    const auto seed = next_seed();
    s.check("sim.joint_mgf", 4.0, [&] {
      double worst = 0.0;
      for (double s1 : {-1.0, -0.5, 0.0})
        for (double s2 : {-1.0, -0.5, 0.0}) {
          const McMean m = estimate_joint_mgf({1.0, 2}, s1, s2, n_paths, seed, opts);
          worst = std::max(worst, z_score(m, joint_mgf_first_jump({1.0, 2}, s1, s2)));
        }
      return worst;
    });
  }
  {
    const MippParams p{1.0, 2};
    const auto seed = next_seed();
    s.check("sim.martingale_linear", 4.0, [&] {
      return z_score(martingale_check(p, MartingaleKind::linear, 1.0, n_paths, seed, 0, 0, opts), 0.0);
    });
    s.check("sim.martingale_quadratic", 4.0, [&] {
      return z_score(martingale_check(p, MartingaleKind::quadratic, 1.0, n_paths, seed, 0, 0, opts),
                     0.0);
    });
    s.check("sim.martingale_exponential", 4.0, [&] {
      const double beta = -0.5;
      const McMean balanced = martingale_check(p, MartingaleKind::exponential, 1.0, n_paths, seed,
                                               -char_exponent(p, beta), beta, opts);
      const McMean integral =
          martingale_check(p, MartingaleKind::exponential, 1.0, n_paths, seed, 0.0, beta, opts);
      return std::max(z_score(balanced, 1.0), z_score(integral, 1.0));
    });
  }
  {
    const auto seed = next_seed();
    s.check("sim.lln", 4.0, [&] {
      const double horizon = 1e4;
      CounterStream rng({seed, 0});
      const Path path = simulate_mipp({1.0, 2}, horizon, rng);
      return std::abs(static_cast<double>(path.terminal_value()) / horizon - 1.0) /
             std::sqrt(2.0 / horizon);
    });
  }
  {
    const auto seed = next_seed();
    s.check("sim.bridge_first_passage", 3.0, [&] {
      RiskModel bm;
      bm.c = 0.5;
      bm.sigma = 1.0;
      bm.lambda = 0.0;
      const double x = 0.3;
      const double horizon = 1.0;
      std::vector<double> hit(static_cast<std::size_t>(n_paths));
      parallel_for_paths(
          n_paths,
          [&](std::int64_t i) {
            CounterStream rng({seed, static_cast<std::uint64_t>(i)});
            hit[static_cast<std::size_t>(i)] =
                simulate_risk(bm, x, std::nullopt, horizon, rng).ruined ? 1.0 : 0.0;
          },
          opts);
      const double st = bm.sigma * std::sqrt(horizon);
      const auto cdf = [](double v) { return 0.5 * std::erfc(-v / std::numbers::sqrt2); };
      const double exact = cdf((-x - bm.c * horizon) / st) +
                           std::exp(-2.0 * bm.c * x / (bm.sigma * bm.sigma)) *
                               cdf((-x + bm.c * horizon) / st);
      return z_score(summarize(hit), exact);
    });
  }
  {
    const auto seed = next_seed();
    s.check("sim.deterministic_drift_without_claims", 0.0, [&] {
      RiskModel m = cfg.risk_model();
      m.sigma = 0.0;
      m.lambda = 0.0;
      CounterStream rng({seed, 0});
      const RiskOutcome o = simulate_risk(m, 1.0, std::nullopt, 5.0, rng);
      return (o.ruined ? 1.0 : 0.0) + std::abs(o.terminal_surplus - (1.0 + m.c * 5.0));
    });
  }
  {
    const auto seed = next_seed();
    s.check("sim.stream_determinism", 0.0, [&] {
      const RiskModel m = cfg.risk_model();
      double mismatches = 0.0;
      for (std::uint64_t id = 0; id < 50; ++id) {
        std::vector<PathEvent> a, b;
        CounterStream r1({seed, id}), r2({seed, id});
        const RiskOutcome o1 = simulate_risk(m, 1.0, 3.0, 50.0, r1, &a);
        const RiskOutcome o2 = simulate_risk(m, 1.0, 3.0, 50.0, r2, &b);
        if (a.size() != b.size() || o1.stop_time != o2.stop_time ||
            o1.terminal_surplus != o2.terminal_surplus) {
          mismatches += 1.0;
          continue;
        }
        for (std::size_t k = 0; k < a.size(); ++k) {
          if (a[k].t != b[k].t || a[k].surplus != b[k].surplus || a[k].kind != b[k].kind) {
            mismatches += 1.0;
            break;
          }
        }
      }
      return mismatches;
    });
  }

  const RiskModel model = cfg.risk_model();
  if (!model.net_profit_holds()) {
    s.check("sim.net_profit_condition", 0.0, [&] { return -model.net_drift(); });
    return;
  }
  {
    const auto seed = next_seed();
    s.check("sim.thread_count_invariance", 0.0, [&] {
      const std::int64_t n = std::min<std::int64_t>(n_paths, 5000);
      const RuinEstimate one = estimate_ruin(model, 1.0, n, cfg.barrier_eps, seed, {1});
      const RuinEstimate many = estimate_ruin(model, 1.0, n, cfg.barrier_eps, seed, {3});
      return one.p_hat == many.p_hat && one.capped_paths == many.capped_paths ? 0.0 : 1.0;
    });
  }
  if (model.sigma > 0.0) {
    const auto seed = next_seed();
    s.check("sim.ruin_from_zero", 0.0, [&] {
      return 1.0 - estimate_ruin(model, 0.0, std::min<std::int64_t>(n_paths, 1000),
                                 cfg.barrier_eps, seed, opts)
                       .p_hat;
    });
  }
  {
    const auto seed = next_seed();
    s.check("sim.ruin_from_survival_barrier", cfg.barrier_eps, [&] {
      const double barrier = survival_barrier(model, cfg.barrier_eps);
      const RuinEstimate e = estimate_ruin(model, barrier, n_paths, cfg.barrier_eps, seed, opts);
      return e.p_hat - 3.0 * e.std_error;
    });
  }
  {
    const auto seed = next_seed();
    s.check("sim.expected_drift", 4.0, [&] {
      // Start far from zero so that no path is stopped by ruin within one unit.
      std::vector<double> change(static_cast<std::size_t>(n_paths));
      parallel_for_paths(
          n_paths,
          [&](std::int64_t i) {
            CounterStream rng({seed, static_cast<std::uint64_t>(i)});
            const RiskOutcome o = simulate_risk(model, 1e6, std::nullopt, 1.0, rng);
            change[static_cast<std::size_t>(i)] = o.terminal_surplus - 1e6;
          },
          opts);
      return z_score(summarize(change), model.net_drift());
    });
  }
  {
    const auto seed = next_seed();
    s.check("sim.laplace_exponent", 4.0, [&] {
      const double theta = 0.5;
      std::vector<double> values(static_cast<std::size_t>(n_paths));
      parallel_for_paths(
          n_paths,
          [&](std::int64_t i) {
            CounterStream rng({seed, static_cast<std::uint64_t>(i)});
            const RiskOutcome o = simulate_risk(model, 1e6, std::nullopt, 1.0, rng);
            values[static_cast<std::size_t>(i)] = std::exp(theta * (o.terminal_surplus - 1e6));
          },
          opts);
      return z_score(summarize(values), std::exp(psi_R(model, theta)));
    });
  }
}

void scale_checks(Suite& s, const RunConfig& cfg) {
  const RiskModel model = cfg.risk_model();
  const Grid grid = Grid::covering(cfg.h, std::max(cfg.xmax, cfg.a));
  const SimOptions opts{cfg.threads};

  s.check("scale.bessel_i1_at_2", 1e-14, [] { return rel(bessel_i1(2.0), 1.590636854637329); });
  s.check("scale.bessel_i1_vs_std", 1e-14, [] {
    double worst = 0.0;
    for (double z : {0.01, 0.5, 1.0, 3.0, 7.5, 12.0, 15.0, 16.0, 25.0, 60.0, 200.0, 600.0}) {
      worst = std::max(worst, rel(bessel_i1(z), std::cyl_bessel_i(1.0, z)));
    }
    return worst;
  });
  s.check("scale.bessel_switchover", 1e-12, [] {
    double worst = 0.0;
    for (double z : {kBesselSwitch, kBesselSwitch + 1e-9, kBesselSwitch + 0.1}) {
      const double series = std::exp(-z) * bessel_i1_series(z);
      worst = std::max(worst, rel(bessel_i1_asymptotic_scaled(z), series));
    }
    return worst;
  });
  s.check("scale.bessel_small_argument", 1e-12, [] { return rel(bessel_i1(1e-6) / 5e-7, 1.0); });

  s.check("scale.psi_at_zero", 0.0, [&] { return std::abs(psi_R(model, 0.0)); });
  s.check("scale.psi_formula", 1e-14, [&] {
    double worst = 0.0;
    for (double theta : {0.5, 1.0, 3.0}) {
      double inner = -model.lambda;
      for (const auto& comp : model.claims) {
        inner += model.lambda * comp.weight * comp.rate / (comp.rate + theta);
      }
      const double direct = model.c * theta - model.lambda + model.lambda * std::exp(inner) +
                            0.5 * model.sigma * model.sigma * theta * theta;
      worst = std::max(worst, rel(psi_R(model, theta), direct));
    }
    return worst;
  });
  s.check("scale.psi_derivative_at_zero", 1e-12, [&] {
    double mean = 0.0;
    for (const auto& comp : model.claims) mean += comp.weight / comp.rate;
    return std::abs(psi_R_derivative(model, 0.0) -
                    (model.c - model.lambda * model.lambda * mean));
  });
  s.check("scale.phi_root", 1e-10, [&] {
    double worst = 0.0;
    for (double q : {0.0, 0.1, 1.0}) worst = std::max(worst, std::abs(psi_R(model, phi_q(model, q)) - q));
    if (model.net_profit_holds()) worst = std::max(worst, std::abs(phi_q(model, 0.0)));
    return worst;
  });
  if (model.sigma > 0.0) {
    s.check("scale.phi_large_q", 0.01, [&] {
      const double q = 1e6;
      return rel(phi_q(model, q), std::sqrt(2.0 * q) / model.sigma);
    });
  }

  s.check("scale.kernel_at_zero", 1e-14, [&] {
    const KernelTable k = kernel_tables(model, 0.0, Grid::covering(0.01, 2.0));
    double expected = 0.0;
    for (const auto& comp : model.claims) expected += model.lambda * comp.weight * comp.rate;
    return rel(k.g_values[0], expected);
  });
  if (model.is_single_exponential()) {
    s.check("scale.kernel_value", 1e-12, [&] {
      const double kd = model.lambda * model.claims[0].rate;
      const double d = model.claims[0].rate;
      const Eigen::VectorXd g = bessel_kernel(kd, d, Grid::covering(0.25, 2.0));
      double worst = 0.0;
      for (Eigen::Index i = 1; i < g.size(); ++i) {
        const double x = 0.25 * static_cast<double>(i);
        const double expected =
            std::exp(-d * x) * std::sqrt(kd / x) * std::cyl_bessel_i(1.0, 2.0 * std::sqrt(kd * x));
        worst = std::max(worst, rel(g[i], expected));
      }
      return worst;
    });
  }

  ScaleTable w0;
  ScaleTable wq;
  bool have_tables = true;
  try {
    w0 = scale_function(model, 0.0, grid, cfg.tol);
    wq = scale_function(model, cfg.q > 0.0 ? cfg.q : 0.1, grid, cfg.tol);
  } catch (const std::exception&) {
    have_tables = false;
  }
  if (!have_tables) {
    s.check("scale.scale_function", 0.0, [] { return kNaN; });
    return;
  }
  s.check("scale.boundary_value", 0.0, [&] {
    const double expected = model.sigma > 0.0 ? 0.0 : 1.0 / model.c;
    return std::max(std::abs(w0.values[0] - expected), std::abs(wq.values[0] - expected));
  });
  s.check("scale.monotone", 1e-10, [&] {
    double worst = 0.0;
    for (const ScaleTable* w : {&w0, &wq}) {
      for (Eigen::Index k = 1; k < w->values.size(); ++k) {
        worst = std::max(worst, w->values[k - 1] - w->values[k]);
      }
    }
    return worst;
  });
  s.check("scale.nonnegative", 0.0, [&] {
    return std::max(0.0, -std::min(w0.values.minCoeff(), wq.values.minCoeff()));
  });
  for (const ScaleTable* w : {&w0, &wq}) {
    const double phi = phi_q(model, w->q);
    std::vector<double> thetas = cfg.theta;
    if (thetas.empty()) thetas = {phi + 1.0, phi + 2.0, phi + 4.0};
    for (double theta : thetas) {
      s.check("scale.laplace_identity_q" + csv_number(w->q) + "_theta" + csv_number(theta), 5e-3,
              [&] { return laplace_identity_residual(model, *w, theta); });
    }
  }

  s.check("scale.exit_endpoints", 0.0, [&] {
    const double at_a = std::abs(two_sided_exit(w0, cfg.a, cfg.a) - 1.0);
    const double at_zero = model.sigma > 0.0 ? two_sided_exit(w0, 0.0, cfg.a) : 0.0;
    return at_a + at_zero;
  });
  s.check("scale.exit_monotone", 0.0, [&] {
    double violations = 0.0;
    const double a = cfg.a;
    double prev = -1.0;
    for (int i = 0; i <= 30; ++i) {
      const double v = two_sided_exit(w0, a * i / 30.0, a);
      if (v < prev) violations += 1.0;
      prev = v;
    }
    prev = 2.0;
    for (double b = 1.0; b <= grid.x_max(); b += 0.5) {
      const double v = two_sided_exit(w0, 1.0, b);
      if (v > prev) violations += 1.0;
      prev = v;
    }
    for (double x : {0.5, 1.0, 2.0}) {
      if (x <= a && two_sided_exit(wq, x, a) > two_sided_exit(w0, x, a)) violations += 1.0;
    }
    return violations;
  });

  {
    // sigma -> 0: W converges to the bounded-variation scale function.
    s.check("scale.sigma_to_zero_decreasing", 0.0, [&] {
      const Grid g = Grid::covering(cfg.h, 3.0);
      RiskModel m = model;
      m.sigma = 0.0;
      const ScaleTable hat = scale_function(m, 0.0, g, cfg.tol);
      const auto from = static_cast<Eigen::Index>(std::llround(0.2 / g.h));
      double prev = std::numeric_limits<double>::infinity();
      double violations = 0.0;
      for (double sig : {0.2, 0.1, 0.05}) {
        m.sigma = sig;
        const ScaleTable w = scale_function(m, 0.0, g, cfg.tol);
        const double dist = (w.values - hat.values).tail(g.m - from).cwiseAbs().maxCoeff();
        if (!(dist < prev)) violations += 1.0;
        prev = dist;
      }
      return violations;
    });
    s.check("scale.bounded_variation_boundary", DBL_EPSILON, [&] {
      RiskModel m = model;
      m.sigma = 0.0;
      const ScaleTable hat = scale_function(m, 0.0, Grid::covering(cfg.h, 1.0), cfg.tol);
      return rel(hat.values[0], 1.0 / m.c);
    });
  }

  {
    RiskModel mix = model;
    mix.claims = {{0.5, 1.0}, {0.5, 2.0}};
    s.check("scale.mixture_kernel_three_term", 1e-12, [&] {
      const Grid g = Grid::covering(cfg.h, std::min(grid.x_max(), 5.0));
      const KernelTable k = kernel_tables(mix, 0.0, g);
      const Eigen::VectorXd g1 = bessel_kernel(mix.lambda * 0.5 * 1.0, 1.0, g);
      const Eigen::VectorXd g2 = bessel_kernel(mix.lambda * 0.5 * 2.0, 2.0, g);
      const Eigen::VectorXd explicit_form = g1 + g2 + convolve_trapezoid(g1, g2, g.h);
      return (k.g_values - explicit_form).cwiseAbs().maxCoeff() / explicit_form.cwiseAbs().maxCoeff();
    });
    s.check("scale.mixture_laplace_identity", 5e-3, [&] {
      const ScaleTable w = scale_function(mix, 0.0, grid, cfg.tol);
      return laplace_identity_residual(mix, w, phi_q(mix, 0.0) + 2.0);
    });
    s.check("scale.mixture_single_component", 1e-12, [&] {
      RiskModel one = model;
      one.claims = {{1.0, model.claims.front().rate}};
      RiskModel single = RiskModel::single_exponential(model.c, model.sigma, model.lambda,
                                                       model.claims.front().rate);
      const Grid g = Grid::covering(cfg.h, std::min(grid.x_max(), 5.0));
      const ScaleTable a = scale_function(one, 0.0, g, cfg.tol);
      const ScaleTable b = scale_function(single, 0.0, g, cfg.tol);
      return (a.values - b.values).cwiseAbs().maxCoeff() / b.values.cwiseAbs().maxCoeff();
    });
  }

  if (model.is_single_exponential()) {
    s.check("scale.expected_drift_wald", 1e-14, [&] {
      const double d = model.claims.front().rate;
      return std::abs(expected_drift(model) - (model.c - model.lambda * model.lambda / d));
    });
  }

  if (!model.net_profit_holds()) return;
  s.check("scale.survival_limits", 0.0, [&] {
    double violations = 0.0;
    if (model.sigma > 0.0 && survival_probability(model, w0, 0.0) != 0.0) violations += 1.0;
    double prev = -1.0;
    for (Eigen::Index k = 0; k < w0.grid.m; k += std::max<Eigen::Index>(1, w0.grid.m / 200)) {
      const double v = survival_probability(model, w0, w0.grid.x(k));
      if (v < prev) violations += 1.0;
      prev = v;
    }
    if (!(prev > 0.99)) violations += 1.0;
    return violations;
  });
  // ruin(x) exp(R x) <= 1; measured is the largest excess over 1
  s.check("scale.lundberg_bound", 1e-6, [&] {
    const double r = adjustment_coefficient(model);
    double worst = 0.0;
    for (Eigen::Index k = 0; k < w0.grid.m; k += std::max<Eigen::Index>(1, w0.grid.m / 200)) {
      const double x = w0.grid.x(k);
      worst = std::max(worst, ruin_probability(model, w0, x) * std::exp(r * x) - 1.0);
    }
    return worst;
  });
  for (double x : cfg.x) {
    if (x > grid.x_max()) continue;
    const std::uint64_t seed = cfg.seed + 0x51ED27ULL + static_cast<std::uint64_t>(x * 1000.0);
    const double analytic = ruin_probability(model, w0, x);
    // threshold: 3 standard errors plus the barrier bias bound
    RuinEstimate e;
    double threshold = kNaN;
    try {
      e = estimate_ruin(model, x, cfg.paths, cfg.barrier_eps, seed, opts);
      threshold = 3.0 * e.std_error + cfg.barrier_eps;
    } catch (const std::exception&) {
    }
    s.check("scale.ruin_vs_mc_x" + csv_number(x), threshold,
            [&] { return std::abs(analytic - e.p_hat); });
  }
  {
    const double x = std::min(1.0, cfg.a);
    const std::uint64_t seed = cfg.seed + 0xE817ULL;
    McMean m;
    double threshold = kNaN;
    try {
      m = estimate_exit(model, x, cfg.a, cfg.paths, seed, opts);
      threshold = 3.0 * m.std_error;
    } catch (const std::exception&) {
    }
    s.check("scale.exit_vs_mc", threshold, [&] { return std::abs(two_sided_exit(w0, x, cfg.a) - m.mean); });
  }
}

}  // namespace

std::vector<CheckResult> run_validation(const RunConfig& config) {
  Suite s;
  dist_checks(s, config);
  sim_checks(s, config);
  scale_checks(s, config);
  return s.take();
}

std::string validation_csv(const std::vector<CheckResult>& results) {
  std::string out;
  csv_row(out, {"check", "measured", "threshold", "status"});
  for (const auto& r : results) {
    const std::string measured = std::isnan(r.measured) ? "nan" : csv_number(r.measured);
    const std::string threshold = std::isnan(r.threshold) ? "nan" : csv_number(r.threshold);
    csv_row(out, {r.name, measured, threshold, r.passed ? "pass" : "fail"});
  }
  return out;
}

}  // namespace mipp

#include "mipp/run.hpp"

#include "mipp/csv.hpp"
#include "mipp/errors.hpp"
#include "mipp/scale.hpp"
#include "mipp/sim.hpp"
#include "mipp/validate.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace mipp {

namespace {

std::string render_pmf(const RunConfig& cfg) {
  const Pmf p = pmf(cfg.mipp(), cfg.t, cfg.eps);
  std::string out;
  csv_row(out, {"k", "probability"});
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    csv_row(out, {std::to_string(k), csv_number(p.masses[k])});
  }
  return out;
}

// Central moments rebuilt from the raw moments of the Bell representation.
MomentSet bell_moments(const RunConfig& cfg) {
  double raw[5];
  for (int m = 0; m <= 4; ++m) raw[m] = moment_bell(cfg.mipp(), cfg.t, m, std::min(cfg.eps, 1e-12));
  const double mu = raw[1];
  const double var = raw[2] - mu * mu;
  const double c3 = raw[3] - 3.0 * mu * raw[2] + 2.0 * mu * mu * mu;
  const double c4 = raw[4] - 4.0 * mu * raw[3] + 6.0 * mu * mu * raw[2] - 3.0 * mu * mu * mu * mu;
  return {mu, var, c3 / (var * std::sqrt(var)), c4 / (var * var)};
}

std::string render_moments(const RunConfig& cfg) {
  const MomentSet closed = moments_closed(cfg.mipp(), cfg.t);
  const MomentSet bell = bell_moments(cfg);
  std::string out;
  csv_row(out, {"moment", "value", "bell_check"});
  csv_row(out, {"mean", csv_number(closed.mean), csv_number(bell.mean)});
  csv_row(out, {"variance", csv_number(closed.variance), csv_number(bell.variance)});
  csv_row(out, {"skewness", csv_number(closed.skewness), csv_number(bell.skewness)});
  csv_row(out, {"kurtosis", csv_number(closed.kurtosis), csv_number(bell.kurtosis)});
  return out;
}

std::string render_jumps(const RunConfig& cfg) {
  const Pmf f = first_jump_pmf(cfg.mipp(), cfg.eps);
  std::string out = "# sojourn_rate=" + csv_number(sojourn_rate(cfg.mipp())) + "\n";
  csv_row(out, {"k", "first_jump_probability"});
  for (Eigen::Index k = 1; k < f.size(); ++k) {
    csv_row(out, {std::to_string(k), csv_number(f.masses[k])});
  }
  return out;
}

std::string render_simulate(const RunConfig& cfg) {
  std::vector<PathEvent> events;
  CounterStream rng({cfg.seed, 0});
  simulate_risk(cfg.risk_model(), cfg.x.front(), std::nullopt, cfg.horizon, rng, &events);
  return path_csv(events);
}

std::string render_scale(const RunConfig& cfg) {
  return scale_csv(scale_function(cfg.risk_model(), cfg.q, Grid::covering(cfg.h, cfg.xmax), cfg.tol));
}

double largest(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

std::string render_ruin(const RunConfig& cfg) {
  const RiskModel model = cfg.risk_model();
  model.validate();
  if (!model.net_profit_holds()) {
    throw std::domain_error("net-profit condition violated (c delta <= lambda^2, generally "
                            "c <= lambda^2 E[claim]); ruin is certain from every x");
  }
  const Grid grid = Grid::covering(cfg.h, std::max(cfg.xmax, largest(cfg.x)));
  const ScaleTable w0 = scale_function(model, 0.0, grid, cfg.tol);
  std::string out;
  if (cfg.mc) {
    csv_row(out, {"x", "analytic_survival", "analytic_ruin", "mc_ruin", "mc_stderr"});
  } else {
    csv_row(out, {"x", "analytic_survival", "analytic_ruin"});
  }
  for (double x : cfg.x) {
    const double survival = survival_probability(model, w0, x);
    if (cfg.mc) {
      const RuinEstimate e =
          estimate_ruin(model, x, cfg.paths, cfg.barrier_eps, cfg.seed, {cfg.threads});
      csv_row(out, {csv_number(x), csv_number(survival), csv_number(1.0 - survival),
                    csv_number(e.p_hat), csv_number(e.std_error)});
    } else {
      csv_row(out, {csv_number(x), csv_number(survival), csv_number(1.0 - survival)});
    }
  }
  return out;
}

std::string render_exit(const RunConfig& cfg) {
  for (double x : cfg.x) {
    if (x > cfg.a) throw ConfigError("x", "every x must satisfy x <= a for the exit command");
  }
  const Grid grid = Grid::covering(cfg.h, std::max(cfg.xmax, cfg.a));
  const ScaleTable w = scale_function(cfg.risk_model(), cfg.q, grid, cfg.tol);
  std::string out;
  csv_row(out, {"x", "a", "q", "probability"});
  for (double x : cfg.x) {
    csv_row(out, {csv_number(x), csv_number(cfg.a), csv_number(cfg.q),
                  csv_number(two_sided_exit(w, x, cfg.a))});
  }
  return out;
}

}  // namespace

std::string render(const RunConfig& cfg, bool& all_passed) {
  all_passed = true;
  if (cfg.command == "pmf") return render_pmf(cfg);
  if (cfg.command == "moments") return render_moments(cfg);
  if (cfg.command == "jumps") return render_jumps(cfg);
  if (cfg.command == "simulate") return render_simulate(cfg);
  if (cfg.command == "scale") return render_scale(cfg);
  if (cfg.command == "ruin") return render_ruin(cfg);
  if (cfg.command == "exit") return render_exit(cfg);
  if (cfg.command == "validate") {
    const auto results = run_validation(cfg);
    all_passed = std::all_of(results.begin(), results.end(),
                             [](const CheckResult& r) { return r.passed; });
    return validation_csv(results);
  }
  throw ConfigError("command", cfg.command.empty() ? "no command given"
                                                   : "unknown command '" + cfg.command + "'");
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::string artifact;
  bool all_passed = true;
  try {
    artifact = render(cfg, all_passed);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const TruncationError& e) {
    err << "computation error: " << e.what() << " (achieved bound " << csv_number(e.achieved_bound())
        << ")\n";
    return kExitComputationError;
  } catch (const std::exception& e) {
    err << "computation error: " << e.what() << "\n";
    return kExitComputationError;
  }
  try {
    if (cfg.out.empty()) {
      out << artifact;
      out.flush();
    } else {
      write_file_atomic(cfg.out, artifact);
    }
  } catch (const std::exception& e) {
    err << "output error: " << e.what() << "\n";
    return kExitComputationError;
  }
  if (!all_passed) {
    err << "validation: at least one check failed\n";
    return kExitChecksFailed;
  }
  return kExitOk;
}

}  // namespace mipp

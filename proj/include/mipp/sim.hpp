#pragma once

#include "mipp/dist.hpp"
#include "mipp/risk_model.hpp"
#include "mipp/rng.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace mipp {

/// Jump record of one simulated MIPP path on [0, t_end]. Only strictly
/// positive increments are recorded.
struct Path {
  std::vector<double> jump_times;
  std::vector<std::int64_t> jump_sizes;
  double t_end = 0.0;

  /// V_t for t in [0, t_end].
  std::int64_t value_at(double t) const;
  std::int64_t terminal_value() const;
};

struct FirstJump {
  double time = 0.0;
  std::int64_t size = 0;
};

/// One draw of V_1^(depth), consuming the stream depth first.
std::int64_t sample_v1(double lambda, int depth, CounterStream& rng);

Path simulate_mipp(const MippParams& params, double t_end, CounterStream& rng);

/// First jump time and size, simulated without a horizon. Requires n >= 2
/// or n = 1 (size 1).
FirstJump simulate_first_jump(const MippParams& params, CounterStream& rng);

enum class PathEventKind { claim, barrier, ruin, horizon };

const char* to_string(PathEventKind kind);

struct PathEvent {
  double t = 0.0;
  PathEventKind kind = PathEventKind::claim;
  double surplus = 0.0;
};

struct RiskOutcome {
  bool ruined = false;
  std::optional<double> ruin_time;
  /// Ruin inside a Brownian segment is reported at the midpoint of the
  /// finest sub-segment that contains it.
  bool ruin_time_approximate = false;
  bool exit_level_hit = false;
  bool horizon_reached = false;
  double stop_time = 0.0;
  double terminal_surplus = 0.0;
};

/// Simulates the surplus from x until ruin, the first passage above
/// `upper_barrier`, or `horizon`. Brownian segments between claim epochs
/// are tested for crossings with the exact bridge laws. `lambda == 0` is
/// accepted here (no claims) so the diffusive part can be checked alone.
RiskOutcome simulate_risk(const RiskModel& model, double x, std::optional<double> upper_barrier,
                          double horizon, CounterStream& rng,
                          std::vector<PathEvent>* trace = nullptr);

struct SimOptions {
  /// 0 means std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Runs body(i) for i in [0, n) on a pool of threads. Results must be
/// written to per-index slots; reductions are done afterwards in index order.
void parallel_for_paths(std::int64_t n, const std::function<void(std::int64_t)>& body,
                        const SimOptions& options = {});

struct McMean {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n = 0;
};

/// Mean and standard error of per-path values, summed in index order.
McMean summarize(const std::vector<double>& values);

struct RuinEstimate {
  double p_hat = 0.0;
  double std_error = 0.0;
  std::int64_t n_paths = 0;
  double tail_bias_bound = 0.0;
  double survival_barrier = 0.0;
  /// Paths stopped by the hard horizon cap; counted as ruined.
  std::int64_t capped_paths = 0;
};

/// Infinite-horizon ruin probability. Path i uses stream (master_seed, i).
/// Paths reaching the survival barrier B count as survived; B is chosen so
/// that the analytic ruin probability from B is at most barrier_eps.
RuinEstimate estimate_ruin(const RiskModel& model, double x, std::int64_t n_paths,
                           double barrier_eps, std::uint64_t master_seed,
                           const SimOptions& options = {});

/// Frequency of reaching level a before ruin, starting from x.
McMean estimate_exit(const RiskModel& model, double x, double a, std::int64_t n_paths,
                     std::uint64_t master_seed, const SimOptions& options = {});

enum class MartingaleKind { linear, quadratic, exponential };

/// Empirical mean at time t of
///   linear:      V_t - lambda^n t
///   quadratic:   (V_t - lambda^n t)^2 - Var(V_t)
///   exponential: exp(alpha t + beta V_t)
///                - (alpha + l_n(beta)) int_0^t exp(alpha s + beta V_s) ds
/// The expected values are 0, 0 and 1.
McMean martingale_check(const MippParams& params, MartingaleKind kind, double t,
                        std::int64_t n_paths, std::uint64_t master_seed, double alpha = 0.0,
                        double beta = 0.0, const SimOptions& options = {});

/// Monte Carlo estimate of E exp(s1 J_1 + s2 V(J_1)).
McMean estimate_joint_mgf(const MippParams& params, double s1, double s2, std::int64_t n_paths,
                          std::uint64_t master_seed, const SimOptions& options = {});

}  // namespace mipp

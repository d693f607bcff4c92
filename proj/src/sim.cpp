#include "mipp/sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace mipp {

namespace {

// int_a^b exp(alpha s) ds
double exp_segment_integral(double alpha, double a, double b) {
  if (alpha == 0.0) return b - a;
  return std::exp(alpha * a) * std::expm1(alpha * (b - a)) / alpha;
}

std::int64_t base_increment(const MippParams& params, CounterStream& rng) {
  return params.n == 1 ? 1 : sample_v1(params.lambda, params.n - 1, rng);
}

}  // namespace

std::int64_t Path::value_at(double t) const {
  std::int64_t v = 0;
  for (std::size_t i = 0; i < jump_times.size() && jump_times[i] <= t; ++i) v += jump_sizes[i];
  return v;
}

std::int64_t Path::terminal_value() const {
  std::int64_t v = 0;
  for (auto s : jump_sizes) v += s;
  return v;
}

std::int64_t sample_v1(double lambda, int depth, CounterStream& rng) {
  if (depth < 1) throw std::domain_error("sample_v1: depth must be >= 1");
  const auto count = static_cast<std::int64_t>(rng.poisson(lambda));
  if (depth == 1) return count;
  std::int64_t sum = 0;
  for (std::int64_t i = 0; i < count; ++i) sum += sample_v1(lambda, depth - 1, rng);
  return sum;
}

Path simulate_mipp(const MippParams& params, double t_end, CounterStream& rng) {
  params.validate();
  if (!(t_end > 0.0)) throw std::domain_error("simulate_mipp: t_end must be > 0");
  Path path;
  path.t_end = t_end;
  double t = 0.0;
  for (;;) {
    t += rng.exponential(params.lambda);
    if (t > t_end) break;
    const std::int64_t inc = base_increment(params, rng);
    if (inc > 0) {
      path.jump_times.push_back(t);
      path.jump_sizes.push_back(inc);
    }
  }
  return path;
}

FirstJump simulate_first_jump(const MippParams& params, CounterStream& rng) {
  params.validate();
  double t = 0.0;
  for (;;) {
    t += rng.exponential(params.lambda);
    const std::int64_t inc = base_increment(params, rng);
    if (inc > 0) return {t, inc};
  }
}

const char* to_string(PathEventKind kind) {
  switch (kind) {
    case PathEventKind::claim: return "claim";
    case PathEventKind::barrier: return "barrier";
    case PathEventKind::ruin: return "ruin";
    case PathEventKind::horizon: return "horizon";
  }
  return "unknown";
}

void parallel_for_paths(std::int64_t n, const std::function<void(std::int64_t)>& body,
                        const SimOptions& options) {
  unsigned threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, threads);
  if (threads == 1 || n < 2) {
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned tid = 0; tid < threads; ++tid) {
    pool.emplace_back([&, tid] {
      try {
        for (std::int64_t i = tid; i < n; i += threads) body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

McMean summarize(const std::vector<double>& values) {
  McMean out;
  out.n = static_cast<std::int64_t>(values.size());
  if (values.empty()) return out;
  long double sum = 0.0L;
  for (double v : values) sum += v;
  const long double mean = sum / static_cast<long double>(values.size());
  long double ss = 0.0L;
  for (double v : values) ss += (v - mean) * (v - mean);
  out.mean = static_cast<double>(mean);
  if (values.size() > 1) {
    const long double var = ss / static_cast<long double>(values.size() - 1);
    out.std_error = static_cast<double>(std::sqrt(var / static_cast<long double>(values.size())));
  }
  return out;
}

McMean martingale_check(const MippParams& params, MartingaleKind kind, double t,
                        std::int64_t n_paths, std::uint64_t master_seed, double alpha,
                        double beta, const SimOptions& options) {
  params.validate();
  if (!(t > 0.0)) throw std::domain_error("martingale_check: t must be > 0");
  if (n_paths < 1) throw std::domain_error("martingale_check: n_paths must be >= 1");
  const double mean = std::pow(params.lambda, params.n) * t;
  const double variance = kind == MartingaleKind::quadratic ? moments_closed(params, t).variance : 0.0;
  const double drift = kind == MartingaleKind::exponential ? alpha + char_exponent(params, beta) : 0.0;

  std::vector<double> values(static_cast<std::size_t>(n_paths));
  parallel_for_paths(
      n_paths,
      [&](std::int64_t i) {
        CounterStream rng({master_seed, static_cast<std::uint64_t>(i)});
        const Path path = simulate_mipp(params, t, rng);
        double value = 0.0;
        switch (kind) {
          case MartingaleKind::linear:
            value = static_cast<double>(path.terminal_value()) - mean;
            break;
          case MartingaleKind::quadratic: {
            const double m = static_cast<double>(path.terminal_value()) - mean;
            value = m * m - variance;
            break;
          }
          case MartingaleKind::exponential: {
            double integral = 0.0;
            double left = 0.0;
            std::int64_t level = 0;
            for (std::size_t j = 0; j < path.jump_times.size(); ++j) {
              integral += std::exp(beta * static_cast<double>(level)) *
                          exp_segment_integral(alpha, left, path.jump_times[j]);
              left = path.jump_times[j];
              level += path.jump_sizes[j];
            }
            integral += std::exp(beta * static_cast<double>(level)) *
                        exp_segment_integral(alpha, left, t);
            value = std::exp(alpha * t + beta * static_cast<double>(level)) - drift * integral;
            break;
          }
        }
        values[static_cast<std::size_t>(i)] = value;
      },
      options);
  return summarize(values);
}

McMean estimate_joint_mgf(const MippParams& params, double s1, double s2, std::int64_t n_paths,
                          std::uint64_t master_seed, const SimOptions& options) {
  params.validate();
  if (n_paths < 1) throw std::domain_error("estimate_joint_mgf: n_paths must be >= 1");
  std::vector<double> values(static_cast<std::size_t>(n_paths));
  parallel_for_paths(
      n_paths,
      [&](std::int64_t i) {
        CounterStream rng({master_seed, static_cast<std::uint64_t>(i)});
        const FirstJump jump = simulate_first_jump(params, rng);
        values[static_cast<std::size_t>(i)] =
            std::exp(s1 * jump.time + s2 * static_cast<double>(jump.size));
      },
      options);
  return summarize(values);
}

}  // namespace mipp

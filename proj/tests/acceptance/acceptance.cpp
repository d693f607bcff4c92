// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance [path-to-mipp-cli]

#include "mipp/dist.hpp"
#include "mipp/scale.hpp"
#include "mipp/sim.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace mipp;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

const RiskModel kReference = RiskModel::single_exponential(2.0, 0.5, 1.0, 1.0);

double pmf_moment(const Pmf& p, int order, double center) {
  long double s = 0.0L;
  for (Eigen::Index k = 0; k < p.size(); ++k) s += p.masses[k] * std::pow(k - center, order);
  return static_cast<double>(s);
}

Outcome pmf_correctness() {
  double norm = 0, mean_err = 0, var_err = 0;
  for (int n = 1; n <= 4; ++n)
    for (double lam : {0.5, 1.0, 2.0})
      for (double t : {0.5, 1.0, 2.0}) {
        const Pmf p = pmf({lam, n}, t, 1e-12);
        norm = std::max(norm, std::abs(p.total() + p.tail_bound - 1.0));
        const double mean = pmf_moment(p, 1, 0.0);
        mean_err = std::max(mean_err, rel(mean, std::pow(lam, n) * t));
        var_err = std::max(var_err, rel(pmf_moment(p, 2, mean), moments_closed({lam, n}, t).variance));
      }
  return {norm <= 1e-12 && mean_err <= 1e-6 && var_err <= 1e-6,
          "normalization " + fmt("%.2e", norm) + ", mean rel " + fmt("%.2e", mean_err) +
              ", variance rel " + fmt("%.2e", var_err)};
}

Outcome zero_state() {
  double worst = 0.0;
  for (double lam : {0.5, 1.0, 2.0}) {
    double q = 0.0;
    for (int m = 1; m <= 4; ++m) {
      q = 1.0 - std::exp(-lam * (m == 1 ? 1.0 : q));
      worst = std::max(worst, std::abs(pmf({lam, m}, 1.0, 1e-12)[0] - (1.0 - q)));
    }
  }
  return {worst <= 1e-10, "max |P(V=0) - (1 - q_m)| = " + fmt("%.2e", worst)};
}

Outcome sojourn_law() {
  const double rate = 1.0 - std::exp(-(1.0 - std::exp(-1.0)));  // lambda q_2
  const std::size_t wanted = 100000;
  CounterStream rng({42, 0});
  const Path path = simulate_mipp({1.0, 3}, 1.1 * wanted / rate, rng);
  if (path.jump_times.size() < wanted) return {false, "path too short"};
  std::vector<double> gaps;
  double prev = 0.0;
  for (std::size_t k = 0; k < wanted; ++k) {
    gaps.push_back(path.jump_times[k] - prev);
    prev = path.jump_times[k];
  }
  const McMean m = summarize(gaps);
  const double z = std::abs(m.mean - 1.0 / rate) / m.std_error;
  return {z <= 4.0, "mean " + fmt("%.6f", m.mean) + " vs " + fmt("%.6f", 1.0 / rate) + " (" +
                        fmt("%.2f", z) + " se)"};
}

Outcome first_jump_size() {
  const int n = 100000;
  std::map<std::int64_t, double> counts;
  for (int i = 0; i < n; ++i) {
    CounterStream rng({43, static_cast<std::uint64_t>(i)});
    counts[simulate_first_jump({1.0, 2}, rng).size] += 1.0;
  }
  // lambda^k e^{-lambda} / (k! (1 - e^{-lambda})) at lambda = 1
  double tv = 0.0, covered = 0.0, listed = 0.0, fact = 1.0;
  for (int k = 1; k < 40; ++k) {
    fact *= k;
    const double p = std::exp(-1.0) / (fact * (1.0 - std::exp(-1.0)));
    const double emp = counts.count(k) ? counts[k] / n : 0.0;
    tv += std::abs(emp - p);
    covered += emp;
    listed += p;
  }
  tv = 0.5 * (tv + (1.0 - covered) + (1.0 - listed));
  return {tv <= 0.01, "TV " + fmt("%.4f", tv)};
}

Outcome joint_mgf() {
  const MippParams p{1.0, 2};
  const double rate = 1.0 - std::exp(-1.0);
  double worst_z = 0.0, worst_marginal = 0.0;
  for (double s1 : {-1.0, -0.5, 0.0})
    for (double s2 : {-1.0, -0.5, 0.0}) {
      const McMean m = estimate_joint_mgf(p, s1, s2, 100000, 44);
      const double f = joint_mgf_first_jump(p, s1, s2);
      const double diff = std::abs(m.mean - f);
      worst_z = std::max(worst_z, diff == 0.0 ? 0.0 : diff / m.std_error);
    }
  for (double s1 : {-1.0, -0.5, 0.0, 0.3}) {
    worst_marginal = std::max(worst_marginal, rel(joint_mgf_first_jump(p, s1, 0.0), rate / (rate - s1)));
  }
  return {worst_z <= 4.0 && worst_marginal <= 4.0 * 2.220446049250313e-16,
          "max " + fmt("%.2f", worst_z) + " se; marginal rel " + fmt("%.1e", worst_marginal)};
}

Outcome martingales() {
  const MippParams p{1.0, 2};
  const double beta = -0.5;
  // alpha + lambda - lambda E exp(beta V_1^(1)) = 0
  const double alpha = -(1.0 - std::exp(std::exp(beta) - 1.0));
  const McMean lin = martingale_check(p, MartingaleKind::linear, 1.0, 100000, 45);
  const McMean quad = martingale_check(p, MartingaleKind::quadratic, 1.0, 100000, 46);
  const McMean ex = martingale_check(p, MartingaleKind::exponential, 1.0, 100000, 47, alpha, beta);
  const double z1 = std::abs(lin.mean) / lin.std_error;
  const double z2 = std::abs(quad.mean) / quad.std_error;
  const double z3 = ex.std_error > 0 ? std::abs(ex.mean - 1.0) / ex.std_error : 0.0;
  return {z1 <= 4.0 && z2 <= 4.0 && z3 <= 4.0,
          "linear " + fmt("%.2f", z1) + " se, quadratic " + fmt("%.2f", z2) + " se, exponential " +
              fmt("%.2f", z3) + " se"};
}

Outcome governing_equation() {
  double worst = 0.0, worst_order = 0.0;
  for (int k = 0; k <= 10; ++k) {
    const double r1 = governing_residual({1.0, 2}, 1.0, k, 1e-4);
    const double r2 = governing_residual({1.0, 2}, 1.0, k, 2e-4);
    worst = std::max(worst, r1);
    worst_order = std::max(worst_order, std::abs(std::log2(r2 / r1 / 4.0)));
  }
  return {worst <= 1e-3 && worst_order <= 1.0,
          "max residual " + fmt("%.2e", worst) + ", max |log2(ratio/4)| " + fmt("%.3f", worst_order)};
}

Outcome laplace_identity() {
  const Grid g = Grid::covering(1e-3, 20.0);
  double worst = 0.0;
  for (double q : {0.0, 0.1}) {
    const ScaleTable w = scale_function(kReference, q, g);
    const double phi = phi_q(kReference, q);
    for (double d : {1.0, 2.0, 4.0}) worst = std::max(worst, laplace_identity_residual(kReference, w, phi + d));
  }
  return {worst <= 5e-3, "max relative residual " + fmt("%.2e", worst)};
}

Outcome ruin_vs_mc() {
  const ScaleTable w = scale_function(kReference, 0.0, Grid::covering(1e-3, 20.0));
  bool ok = true;
  std::string detail;
  for (double x : {0.5, 1.0, 2.0}) {
    const double analytic = ruin_probability(kReference, w, x);
    const RuinEstimate e = estimate_ruin(kReference, x, 200000, 1e-4, 48);
    const double diff = std::abs(analytic - e.p_hat);
    ok = ok && diff <= 3.0 * e.std_error + 1e-4;
    detail += "x=" + fmt("%g", x) + ": " + fmt("%.5f", analytic) + " vs " + fmt("%.5f", e.p_hat) +
              " (" + fmt("%.2f", diff / e.std_error) + " se); ";
  }
  return {ok, detail};
}

Outcome two_sided() {
  const ScaleTable w = scale_function(kReference, 0.0, Grid::covering(1e-3, 3.0));
  const double analytic = two_sided_exit(w, 1.0, 3.0);
  const McMean m = estimate_exit(kReference, 1.0, 3.0, 100000, 49);
  const double z = std::abs(analytic - m.mean) / m.std_error;
  return {z <= 3.0, fmt("%.5f", analytic) + " vs " + fmt("%.5f", m.mean) + " (" + fmt("%.2f", z) + " se)"};
}

Outcome sigma_to_zero() {
  const Grid g = Grid::covering(1e-3, 3.0);
  RiskModel m = kReference;
  m.sigma = 0.0;
  const ScaleTable hat = scale_function(m, 0.0, g);
  const Eigen::Index from = 200;  // x = 0.2
  std::vector<double> dist;
  for (double s : {0.2, 0.1, 0.05}) {
    m.sigma = s;
    const ScaleTable w = scale_function(m, 0.0, g);
    dist.push_back((w.values - hat.values).tail(g.m - from).cwiseAbs().maxCoeff());
  }
  const bool decreasing = dist[0] > dist[1] && dist[1] > dist[2];
  const double boundary = std::abs(hat.values[0] - 1.0 / m.c);
  return {decreasing && boundary <= 2.220446049250313e-16,
          "sup distances " + fmt("%.4f", dist[0]) + ", " + fmt("%.4f", dist[1]) + ", " +
              fmt("%.4f", dist[2]) + "; |W(0) - 1/c| = " + fmt("%.1e", boundary)};
}

Outcome mixture() {
  RiskModel mix = kReference;
  mix.claims = {{0.5, 1.0}, {0.5, 2.0}};
  const Grid g = Grid::covering(1e-3, 20.0);
  const ScaleTable w = scale_function(mix, 0.0, g);
  const double residual = laplace_identity_residual(mix, w, phi_q(mix, 0.0) + 2.0);
  const KernelTable k = kernel_tables(mix, 0.0, g);
  const Eigen::VectorXd g1 = bessel_kernel(0.5, 1.0, g);
  const Eigen::VectorXd g2 = bessel_kernel(1.0, 2.0, g);
  const double kernel_err =
      (k.g_values - (g1 + g2 + convolve_trapezoid(g1, g2, g.h))).cwiseAbs().maxCoeff();
  return {residual <= 5e-3 && kernel_err <= 1e-12,
          "residual " + fmt("%.2e", residual) + ", kernel " + fmt("%.1e", kernel_err)};
}

Outcome appendix_moments() {
  const MomentSet at = moments_closed({1.0, 2}, 1.0);
  double branch = 0.0;
  for (double lam : {1.0 - 1e-5, 1.0 + 1e-5}) {
    const MomentSet m = moments_closed({lam, 2}, 1.0);
    branch = std::max({branch, rel(m.mean, at.mean), rel(m.variance, at.variance),
                       rel(m.skewness, at.skewness), rel(m.kurtosis, at.kurtosis)});
  }
  const MippParams p{0.5, 2};
  const MomentSet c = moments_closed(p, 1.0);
  const double mu = c.mean, v = c.variance;
  const double c3 = c.skewness * v * std::sqrt(v), c4 = c.kurtosis * v * v;
  const double raw[] = {1.0, mu, v + mu * mu, c3 + 3 * mu * v + mu * mu * mu,
                        c4 + 4 * mu * c3 + 6 * mu * mu * v + mu * mu * mu * mu};
  double bell = 0.0;
  for (int m = 0; m <= 4; ++m) bell = std::max(bell, rel(moment_bell(p, 1.0, m), raw[m]));
  const double lam = 2.0;
  const double skew_lim = (lam + 2) / ((lam + 1) * std::sqrt(lam - 1));
  const double kurt_lim = (6 + 6 * lam + 5 * lam * lam + lam * lam * lam) /
                              ((lam * lam - 1) * (lam * lam + lam + 1)) + 3.0;
  const MomentSet big = moments_closed({lam, 40}, 1.0);
  const double limit = std::max(rel(big.skewness, skew_lim), rel(big.kurtosis, kurt_lim));
  return {branch <= 1e-3 && bell <= 1e-8 && limit <= 1e-6,
          "branch " + fmt("%.1e", branch) + ", Bell " + fmt("%.1e", bell) + ", n=40 limits " +
              fmt("%.1e", limit)};
}

Outcome lln() {
  const double horizon = 1e4;
  CounterStream rng({50, 0});
  const Path path = simulate_mipp({1.0, 2}, horizon, rng);
  const double dev = std::abs(static_cast<double>(path.terminal_value()) / horizon - 1.0);
  const double bound = 4.0 * std::sqrt(2.0 / horizon);
  return {dev <= bound, "|V(T)/T - 1| = " + fmt("%.4f", dev) + " (bound " + fmt("%.4f", bound) + ")"};
}

Outcome reproducibility(const std::string& cli) {
  if (cli.empty()) return {false, "no CLI path given"};
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path();
  const std::string a = (dir / "mipp_validate_a.csv").string();
  const std::string b = (dir / "mipp_validate_b.csv").string();
  const std::string run_a = cli + " validate --seed 42 --threads 1 --out " + a;
  const std::string run_b = cli + " validate --seed 42 --threads 4 --out " + b;
  const int code_a = std::system(run_a.c_str());
  const int code_b = std::system(run_b.c_str());
  const auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  const std::string ta = slurp(a), tb = slurp(b);
  const bool same = !ta.empty() && ta == tb;
  fs::remove(a);
  fs::remove(b);
  return {same, std::string(same ? "identical" : "different") + " (" + std::to_string(ta.size()) +
                    " bytes; exit codes " + std::to_string(code_a) + ", " + std::to_string(code_b) + ")"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"pmf correctness", pmf_correctness},
      {"zero state vs q recursion", zero_state},
      {"sojourn law", sojourn_law},
      {"first jump size", first_jump_size},
      {"joint mgf", joint_mgf},
      {"martingale battery", martingales},
      {"governing equation", governing_equation},
      {"scale function laplace identity", laplace_identity},
      {"analytic vs monte carlo ruin", ruin_vs_mc},
      {"two-sided exit", two_sided},
      {"sigma to zero", sigma_to_zero},
      {"exponential mixture", mixture},
      {"moments", appendix_moments},
      {"law of large numbers", lln},
      {"reproducibility", [&] { return reproducibility(cli); }},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %2zu %-32s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}

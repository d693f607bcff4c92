#pragma once

#include "mipp/dist.hpp"
#include "mipp/risk_model.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mipp {

/// Invalid configuration. key() names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

struct RunConfig {
  std::string command;

  // process
  double lambda = 1.0;
  int n = 2;
  double t = 1.0;

  // risk model; claims come from delta or from mixture, never both
  double c = 2.0;
  double sigma = 0.5;
  std::vector<ClaimComponent> claims{{1.0, 1.0}};
  bool claims_from_mixture = false;

  // numerics
  double q = 0.0;
  std::vector<double> theta;  // empty: Phi(q) + {1, 2, 4}
  double h = 1e-3;
  double xmax = 20.0;
  double tol = 1e-8;
  double eps = 1e-10;
  double barrier_eps = 1e-4;
  double horizon = 10.0;
  std::vector<double> x{0.5, 1.0, 2.0};
  double a = 3.0;

  // monte carlo
  std::int64_t paths = 100000;
  std::uint64_t seed = 42;
  unsigned threads = 0;
  bool mc = false;

  std::string out;

  MippParams mipp() const { return {lambda, n}; }
  RiskModel risk_model() const;
};

inline const std::vector<std::string> kCommands{"pmf",   "moments", "jumps", "simulate",
                                                "scale", "ruin",    "exit",  "validate"};

/// Parses `key=value` lines. Blank lines and lines starting with '#' are
/// skipped. Unknown keys and malformed lines raise ConfigError.
std::map<std::string, std::string> parse_key_values(const std::string& text);

/// File values first, then overrides (typically from command-line flags).
RunConfig parse_config(const std::string& file_text,
                       const std::map<std::string, std::string>& overrides);

/// Effective configuration as `key=value` lines in sorted key order.
std::string print_config(const RunConfig& config);

bool is_config_key(const std::string& key);

}  // namespace mipp

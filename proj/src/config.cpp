#include "mipp/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace mipp {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "a",       "barrier_eps", "c",     "command", "delta", "eps",  "h",     "horizon",
      "lambda",  "mc",          "mixture", "n",     "out",   "paths", "q",    "seed",
      "sigma",   "t",           "theta", "threads", "tol",   "x",    "xmax"};
  return keys;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(s);
  while (std::getline(in, part, sep)) parts.push_back(trim(part));
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

double to_double(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ConfigError(key, "malformed number '" + text + "'");
  }
  return v;
}

std::int64_t to_integer(const std::string& key, const std::string& text) {
  const double v = to_double(key, text);
  if (v != std::floor(v) || std::abs(v) > 9.0e15) {
    throw ConfigError(key, "expected an integer, got '" + text + "'");
  }
  return static_cast<std::int64_t>(v);
}

std::uint64_t to_seed(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || ptr != end) {
    throw ConfigError(key, "expected an unsigned 64-bit integer, got '" + text + "'");
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  if (s == "1" || s == "true") return true;
  if (s == "0" || s == "false") return false;
  throw ConfigError(key, "expected true/false, got '" + text + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) out.push_back(to_double(key, part));
  if (out.empty()) throw ConfigError(key, "empty list");
  return out;
}

std::vector<ClaimComponent> to_mixture(const std::string& text) {
  std::vector<ClaimComponent> out;
  for (const auto& part : split(text, ',')) {
    const auto colon = part.find(':');
    if (colon == std::string::npos) {
      throw ConfigError("mixture", "expected weight:rate pairs, got '" + part + "'");
    }
    out.push_back({to_double("mixture", part.substr(0, colon)),
                   to_double("mixture", part.substr(colon + 1))});
  }
  if (out.empty()) throw ConfigError("mixture", "empty mixture");
  double total = 0.0;
  for (const auto& comp : out) {
    if (!(comp.weight > 0.0)) throw ConfigError("mixture", "weights must be > 0");
    if (!(comp.rate > 0.0)) throw ConfigError("mixture", "rates must be > 0");
    total += comp.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ConfigError("mixture", "weights must sum to 1");
  return out;
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key, what);
}

std::string fmt(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string fmt_list(const std::vector<double>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ',';
    s += fmt(values[i]);
  }
  return s;
}

}  // namespace

bool is_config_key(const std::string& key) { return known_keys().count(key) != 0; }

RiskModel RunConfig::risk_model() const {
  RiskModel m;
  m.c = c;
  m.sigma = sigma;
  m.lambda = lambda;
  m.claims = claims;
  return m;
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> values;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const std::string s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(s, "expected key=value");
    const std::string key = trim(s.substr(0, eq));
    if (!is_config_key(key)) throw ConfigError(key, "unknown key");
    values[key] = trim(s.substr(eq + 1));
  }
  return values;
}

RunConfig parse_config(const std::string& file_text,
                       const std::map<std::string, std::string>& overrides) {
  std::map<std::string, std::string> values = parse_key_values(file_text);
  for (const auto& [key, value] : overrides) {
    if (!is_config_key(key)) throw ConfigError(key, "unknown key");
    values[key] = value;
  }

  RunConfig cfg;
  const auto get = [&](const char* key) -> const std::string* {
    const auto it = values.find(key);
    return it == values.end() ? nullptr : &it->second;
  };

  if (const auto* v = get("command")) {
    cfg.command = trim(*v);
    require(std::find(kCommands.begin(), kCommands.end(), cfg.command) != kCommands.end(),
            "command", "unknown command '" + cfg.command + "'");
  }
  if (const auto* v = get("lambda")) cfg.lambda = to_double("lambda", *v);
  require(cfg.lambda > 0.0, "lambda", "must be > 0");
  if (const auto* v = get("n")) {
    const auto n = to_integer("n", *v);
    require(n >= 1 && n <= 1000, "n", "must be an integer in [1, 1000]");
    cfg.n = static_cast<int>(n);
  }
  if (const auto* v = get("t")) cfg.t = to_double("t", *v);
  require(cfg.t > 0.0, "t", "must be > 0");
  if (const auto* v = get("c")) cfg.c = to_double("c", *v);
  require(cfg.c > 0.0, "c", "must be > 0");
  if (const auto* v = get("sigma")) cfg.sigma = to_double("sigma", *v);
  require(cfg.sigma >= 0.0, "sigma", "must be >= 0");

  const auto* delta = get("delta");
  const auto* mixture = get("mixture");
  require(!(delta && mixture), "mixture", "give either delta or mixture, not both");
  if (delta) {
    const double d = to_double("delta", *delta);
    require(d > 0.0, "delta", "must be > 0");
    cfg.claims = {{1.0, d}};
  }
  if (mixture) {
    cfg.claims = to_mixture(*mixture);
    cfg.claims_from_mixture = true;
  }

  if (const auto* v = get("q")) cfg.q = to_double("q", *v);
  require(cfg.q >= 0.0, "q", "must be >= 0");
  if (const auto* v = get("theta")) cfg.theta = to_list("theta", *v);
  for (double th : cfg.theta) require(th > 0.0, "theta", "values must be > 0");
  if (const auto* v = get("h")) cfg.h = to_double("h", *v);
  require(cfg.h > 0.0, "h", "must be > 0");
  if (const auto* v = get("xmax")) cfg.xmax = to_double("xmax", *v);
  require(cfg.xmax > cfg.h, "xmax", "must exceed h");
  require(cfg.xmax / cfg.h <= 5e6, "h", "grid too fine for xmax (more than 5e6 points)");
  if (const auto* v = get("tol")) cfg.tol = to_double("tol", *v);
  require(cfg.tol > 0.0, "tol", "must be > 0");
  if (const auto* v = get("eps")) cfg.eps = to_double("eps", *v);
  require(cfg.eps > 0.0 && cfg.eps < 1.0, "eps", "must lie in (0, 1)");
  if (const auto* v = get("barrier_eps")) cfg.barrier_eps = to_double("barrier_eps", *v);
  require(cfg.barrier_eps > 0.0 && cfg.barrier_eps < 1.0, "barrier_eps", "must lie in (0, 1)");
  if (const auto* v = get("horizon")) cfg.horizon = to_double("horizon", *v);
  require(cfg.horizon > 0.0, "horizon", "must be > 0");
  if (const auto* v = get("x")) cfg.x = to_list("x", *v);
  for (double xv : cfg.x) require(xv >= 0.0, "x", "values must be >= 0");
  if (const auto* v = get("a")) cfg.a = to_double("a", *v);
  require(cfg.a > 0.0, "a", "must be > 0");

  if (const auto* v = get("paths")) cfg.paths = to_integer("paths", *v);
  require(cfg.paths >= 1, "paths", "must be >= 1");
  if (const auto* v = get("seed")) cfg.seed = to_seed("seed", *v);
  if (const auto* v = get("threads")) {
    const auto th = to_integer("threads", *v);
    require(th >= 0 && th <= 1024, "threads", "must be in [0, 1024]");
    cfg.threads = static_cast<unsigned>(th);
  }
  if (const auto* v = get("mc")) cfg.mc = to_bool("mc", *v);
  if (const auto* v = get("out")) cfg.out = trim(*v);
  return cfg;
}

std::string print_config(const RunConfig& cfg) {
  std::map<std::string, std::string> values;
  values["a"] = fmt(cfg.a);
  values["barrier_eps"] = fmt(cfg.barrier_eps);
  values["c"] = fmt(cfg.c);
  values["command"] = cfg.command;
  if (cfg.claims_from_mixture) {
    std::string s;
    for (std::size_t i = 0; i < cfg.claims.size(); ++i) {
      if (i) s += ',';
      s += fmt(cfg.claims[i].weight) + ":" + fmt(cfg.claims[i].rate);
    }
    values["mixture"] = s;
  } else {
    values["delta"] = fmt(cfg.claims.front().rate);
  }
  values["eps"] = fmt(cfg.eps);
  values["h"] = fmt(cfg.h);
  values["horizon"] = fmt(cfg.horizon);
  values["lambda"] = fmt(cfg.lambda);
  values["mc"] = cfg.mc ? "true" : "false";
  values["n"] = std::to_string(cfg.n);
  values["out"] = cfg.out;
  values["paths"] = std::to_string(cfg.paths);
  values["q"] = fmt(cfg.q);
  values["seed"] = std::to_string(cfg.seed);
  values["sigma"] = fmt(cfg.sigma);
  values["t"] = fmt(cfg.t);
  values["theta"] = fmt_list(cfg.theta);
  values["threads"] = std::to_string(cfg.threads);
  values["tol"] = fmt(cfg.tol);
  values["x"] = fmt_list(cfg.x);
  values["xmax"] = fmt(cfg.xmax);

  std::string s;
  for (const auto& [key, value] : values) s += key + "=" + value + "\n";
  return s;
}

}  // namespace mipp

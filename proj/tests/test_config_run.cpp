#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mipp/config.hpp"
#include "mipp/csv.hpp"
#include "mipp/run.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace mipp;

namespace {

std::string render_ok(const RunConfig& cfg) {
  bool passed = false;
  std::string s = render(cfg, passed);
  CHECK(passed);
  return s;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream b;
  b << in.rdbuf();
  return b.str();
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("mipp_test_" + name)).string();
}

}  // namespace

TEST_CASE("file values merge with overrides") {
  const RunConfig cfg = parse_config("lambda=1\nn=2\n# comment\n\n", {{"t", "1"}});
  CHECK(cfg.lambda == 1.0);
  CHECK(cfg.n == 2);
  CHECK(cfg.t == 1.0);
  CHECK(cfg.tol == 1e-8);
  CHECK(cfg.eps == 1e-10);
  CHECK(cfg.h == 1e-3);
  CHECK(cfg.paths == 100000);
  CHECK(cfg.seed == 42);
  const RunConfig flagged = parse_config("lambda=3", {{"lambda", "0.5"}});
  CHECK(flagged.lambda == 0.5);
}

TEST_CASE("empty file is the same as flags only") {
  const std::map<std::string, std::string> flags{{"lambda", "2"}, {"n", "3"}, {"command", "pmf"}};
  CHECK(print_config(parse_config("", flags)) == print_config(parse_config("\n\n", flags)));
}

TEST_CASE("configuration errors name the key") {
  const auto key_of = [](const std::string& text, std::map<std::string, std::string> flags = {}) {
    try {
      parse_config(text, flags);
    } catch (const ConfigError& e) {
      return e.key();
    }
    return std::string("<none>");
  };
  CHECK(key_of("lambda=-1") == "lambda");
  CHECK(key_of("lambda=abc") == "lambda");
  CHECK(key_of("lambda=1.5x") == "lambda");
  CHECK(key_of("colour=blue") == "colour");
  CHECK(key_of("n=2.5") == "n");
  CHECK(key_of("", {{"h", "0"}}) == "h");
  CHECK(key_of("delta=1\nmixture=0.5:1,0.5:2") == "mixture");
  CHECK(key_of("mixture=0.5:1,0.4:2") == "mixture");
  CHECK(key_of("eps=2") == "eps");
  CHECK(key_of("paths=0") == "paths");
  CHECK(key_of("command=fly") == "command");
  CHECK(key_of("x=1,-2") == "x");
}

TEST_CASE("print-config is sorted and round-trips") {
  const RunConfig cfg = parse_config("mixture=0.5:1,0.5:2\nsigma=0.25", {});
  const std::string text = print_config(cfg);
  std::istringstream in(text);
  std::string line, prev;
  while (std::getline(in, line)) {
    const std::string key = line.substr(0, line.find('='));
    CHECK(prev < key);
    prev = key;
  }
  std::string filtered;
  std::istringstream again(text);
  while (std::getline(again, line)) {
    if (line.back() != '=') filtered += line + "\n";
  }
  CHECK(print_config(parse_config(filtered, {})) == text);
}

TEST_CASE("numbers use 17 significant digits") {
  CHECK(csv_number(0.1) == "0.10000000000000001");
  CHECK(csv_number(1.0) == "1");
  std::string row;
  csv_row(row, {"a", "b"});
  CHECK(row == "a,b\n");
}

TEST_CASE("moments table") {
  RunConfig cfg = parse_config("command=moments\nlambda=1\nn=2\nt=1", {});
  const std::string s = render_ok(cfg);
  CHECK(s.rfind("moment,value,bell_check\n", 0) == 0);
  CHECK(s.find("mean,1,") != std::string::npos);
  CHECK(s.find("variance,2,") != std::string::npos);
  CHECK(s.find("skewness,1.767766952966368") != std::string::npos);
  CHECK(s.find('\r') == std::string::npos);
}

TEST_CASE("pmf, jumps, scale, exit and simulate tables") {
  RunConfig cfg = parse_config("lambda=1\nn=2", {});
  cfg.command = "pmf";
  CHECK(render_ok(cfg).rfind("k,probability\n0,0.531463605386615", 0) == 0);
  cfg.command = "jumps";
  const std::string jumps = render_ok(cfg);
  CHECK(jumps.rfind("# sojourn_rate=0.632120558828557", 0) == 0);
  CHECK(jumps.find("k,first_jump_probability\n1,0.58197670686932") != std::string::npos);
  cfg.command = "scale";
  cfg.h = 0.01;
  cfg.xmax = 1.0;
  const std::string scale = render_ok(cfg);
  CHECK(scale.rfind("x,W\n0,0\n", 0) == 0);
  cfg.command = "exit";
  cfg.x = {0.0, 3.0};
  const std::string exit_table = render_ok(cfg);
  CHECK(exit_table == "x,a,q,probability\n0,3,0,0\n3,3,0,1\n");
  cfg.command = "simulate";
  cfg.x = {1.0};
  const std::string path = render_ok(cfg);
  CHECK(path.rfind("t,event,surplus\n", 0) == 0);
  CHECK(path == render_ok(cfg));
}

TEST_CASE("validate passes at the default seed") {
  const RunConfig cfg = parse_config("command=validate", {});
  const std::string report = render_ok(cfg);
  CHECK(report.rfind("check,measured,threshold,status\n", 0) == 0);
  CHECK(report.find(",fail\n") == std::string::npos);
}

TEST_CASE("exit codes") {
  std::ostringstream out, err;
  RunConfig cfg = parse_config("command=ruin\nc=0.5\nlambda=1\ndelta=1", {});
  CHECK(run(cfg, out, err) == kExitComputationError);
  CHECK(err.str().find("net-profit condition") != std::string::npos);

  cfg = parse_config("command=exit\nx=4\na=3", {});
  CHECK(run(cfg, out, err) == kExitConfigError);

  cfg = parse_config("command=moments", {});
  CHECK(run(cfg, out, err) == kExitOk);
}

TEST_CASE("artifacts are written only on success") {
  const std::string path = temp_path("ruin.csv");
  std::filesystem::remove(path);
  std::ostringstream out, err;
  RunConfig cfg = parse_config("command=ruin\nc=0.5", {{"out", path}});
  CHECK(run(cfg, out, err) == kExitComputationError);
  CHECK_FALSE(std::filesystem::exists(path));
  CHECK_FALSE(std::filesystem::exists(path + ".partial"));

  cfg = parse_config("command=ruin\nh=0.01", {{"out", path}});
  CHECK(run(cfg, out, err) == kExitOk);
  const std::string text = slurp(path);
  CHECK(text.rfind("x,analytic_survival,analytic_ruin\n", 0) == 0);
  std::filesystem::remove(path);
}

TEST_CASE("ruin table with monte carlo columns is reproducible") {
  RunConfig cfg = parse_config("command=ruin\nh=0.01\nmc=true\npaths=2000\nx=1", {});
  const std::string a = render_ok(cfg);
  cfg.threads = 3;
  const std::string b = render_ok(cfg);
  CHECK(a == b);
  CHECK(a.rfind("x,analytic_survival,analytic_ruin,mc_ruin,mc_stderr\n", 0) == 0);
}

TEST_CASE("command line: config file and flag precedence") {
  const char* cli = std::getenv("MIPP_CLI");
  if (cli == nullptr) return;
  const std::string conf = temp_path("run.conf");
  {
    std::ofstream f(conf);
    f << "lambda=3\nn=2\n";
  }
  const std::string out = temp_path("print.txt");
  const std::string cmd = std::string(cli) + " --config " + conf + " --lambda 1 --t 1 --print-config > " + out;
  REQUIRE(std::system(cmd.c_str()) == 0);
  const std::string text = slurp(out);
  CHECK(text.find("lambda=1\n") != std::string::npos);
  CHECK(text.find("n=2\n") != std::string::npos);
  CHECK(text.find("t=1\n") != std::string::npos);
  std::filesystem::remove(conf);
  std::filesystem::remove(out);
}

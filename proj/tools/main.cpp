#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "multiform/checks.hpp"
#include "multiform/version.hpp"

namespace {

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
  return v;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(std::stoi(item));
  return v;
}

void add_common_options(CLI::App* sub, multiform::RunConfig& cfg, std::string& h_schedule,
                        std::string& quad_orders, std::string& config_path) {
  sub->add_option("--window", cfg.window, "coordinate window size (needs 2*n_max + 3 labels)");
  sub->add_option("--n-max", cfg.n_max, "highest interpolation level to check, 1..3");
  sub->add_option("--trials", cfg.trials, "random trials per property check");
  sub->add_option("--threads", cfg.threads, "worker threads for grid solves");
  sub->add_option("--c", cfg.c, "constant of the closed-form solution");
  sub->add_option("--corner", cfg.corner, "lower corner of the sample cube");
  sub->add_option("--edge", cfg.edge, "edge length of the sample cube");
  sub->add_option("--h-schedule", h_schedule,
                  "comma-separated grid spacings, strictly decreasing, each dividing the edge");
  sub->add_option("--quad-order", quad_orders,
                  "comma-separated quadrature orders, one per tower term");
  sub->add_option("--out", cfg.out, "write the report to this path instead of stdout");
  sub->add_option("--format", cfg.format, "report format: json or text");
  sub->add_option("--config", config_path,
                  "key=value file with the long option names as keys; flags take precedence");
}

// Applies file values only where the flag was not given, so the command line
// always wins.
void apply_config_file(CLI::App* sub, const std::string& path, multiform::RunConfig& cfg,
                       std::string& h_schedule, std::string& quad_orders) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#' || line[first] == ';') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config file line " + std::to_string(lineno) +
                               " is not key=value");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  for (const auto& [key, value] : kv) {
    static const std::set<std::string> known{"window", "n-max",      "trials", "threads",
                                             "c",      "corner",     "edge",   "h-schedule",
                                             "quad-order", "out",    "format"};
    if (!known.count(key))
      throw std::runtime_error("config file has unknown key '" + key + "'");
    if (sub->count("--" + key) > 0) continue;  // flag overrides file
    if (key == "window") cfg.window = std::stoi(value);
    else if (key == "n-max") cfg.n_max = std::stoi(value);
    else if (key == "trials") cfg.trials = std::stoi(value);
    else if (key == "threads") cfg.threads = std::stoi(value);
    else if (key == "c") cfg.c = std::stod(value);
    else if (key == "corner") cfg.corner = std::stod(value);
    else if (key == "edge") cfg.edge = std::stod(value);
    else if (key == "h-schedule") h_schedule = value;
    else if (key == "quad-order") quad_orders = value;
    else if (key == "out") cfg.out = value;
    else if (key == "format") cfg.format = value;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verification engine for lattice multiform structures"};
  app.set_version_flag("--version", std::string(multiform::kVersion));
  app.require_subcommand(1);

  multiform::RunConfig cfg;
  std::string h_schedule, quad_orders, config_path;

  CLI::App* verify = app.add_subcommand("verify", "run the symbolic identity checks");
  CLI::App* numeric = app.add_subcommand("numeric", "run the grid and quadrature checks");
  add_common_options(verify, cfg, h_schedule, quad_orders, config_path);
  add_common_options(numeric, cfg, h_schedule, quad_orders, config_path);
  verify->add_flag("--corrupt-l3", cfg.corrupt_l3)->group("");  // negative-control hook

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* active = verify->parsed() ? verify : numeric;
    if (!config_path.empty())
      apply_config_file(active, config_path, cfg, h_schedule, quad_orders);
    if (!h_schedule.empty()) cfg.h_schedule = parse_double_list(h_schedule);
    if (!quad_orders.empty()) cfg.quad_orders = parse_int_list(quad_orders);
    const multiform::Report report =
        verify->parsed() ? multiform::run_verify(cfg) : multiform::run_numeric(cfg);
    multiform::write_report(report, cfg.out, cfg.format);
    return report.all_passed() ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}

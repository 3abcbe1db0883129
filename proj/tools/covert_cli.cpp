// Command-line front end: validate, capacity, boundary, gamma, sweep, verify-taylor.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "covert/covert.hpp"

namespace {

using nlohmann::json;
using namespace covert;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitParse = 2;

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(); }

json params_to_json(const SuperpositionParams& p) {
  return {{"nu", p.nu},
          {"ptilde_x_a", p.ptilde_x_a.vector()},
          {"pu_b", p.pu_b.vector()},
          {"px_given_u_b", p.px_given_u_b.rows()}};
}

struct RunResult {
  explicit RunResult(std::string name) : command(std::move(name)) {}

  std::string command;
  json inputs = json::object();
  json outputs = json::object();
  std::vector<std::string> warnings;
  json stats = json::object();

  json to_json() const {
    return {{"command", command},
            {"inputs", inputs},
            {"outputs", outputs},
            {"diagnostics", {{"warnings", warnings}, {"stats", stats}}}};
  }
};

void emit(const RunResult& r) { std::cout << r.to_json().dump(2) << '\n'; }

struct OptimizerFlags {
  std::size_t restarts = OptimizerConfig{}.restarts;
  std::size_t weight_grid = OptimizerConfig{}.weight_grid;
  std::size_t local_iters = OptimizerConfig{}.local_iters;
  std::uint64_t seed = OptimizerConfig{}.seed;

  void attach(CLI::App* app) {
    app->add_option("--seed", seed, "Random seed")->capture_default_str();
    app->add_option("--restarts", restarts, "Random starts per |B|")->capture_default_str();
    app->add_option("--weight-grid", weight_grid, "Scalarization weights")->capture_default_str();
    app->add_option("--local-iters", local_iters, "Evaluations per local search")->capture_default_str();
  }

  OptimizerConfig config() const {
    OptimizerConfig c;
    c.restarts = restarts;
    c.weight_grid = weight_grid;
    c.local_iters = local_iters;
    c.seed = seed;
    return c;
  }
};

json conditions_json(const ConditionsReport& r) {
  json violations = json::array();
  for (const auto& v : r.violations) {
    json item = {{"condition", v.condition}, {"input", v.input}};
    if (v.output) item["output"] = *v.output;
    violations.push_back(item);
  }
  return {{"a", r.cond_a}, {"b", r.cond_b}, {"c_user1", r.cond_c_user1}, {"c_user2", r.cond_c_user2},
          {"violations", violations}};
}

int cmd_validate(const std::string& path) {
  RunResult r("validate");
  r.inputs = {{"model", path}};
  const auto model = load_model(path);
  const auto report = check_conditions(model);
  const auto cert = find_degrading_channel(model.p1(), model.p2());
  json degradation = {{"feasible", cert.feasible()}, {"residual", cert.residual}};
  if (cert.w) degradation["W"] = cert.w->rows();
  r.outputs = {{"conditions", conditions_json(report)}, {"degradation", degradation}};
  if (!report.all()) r.warnings.push_back("conditions: violated");
  if (!cert.feasible()) {
    r.warnings.push_back("degradation: infeasible");
    std::cerr << "degradation: infeasible\n";
  }
  emit(r);
  return report.all() && cert.feasible() ? kExitOk : kExitFailure;
}

int cmd_capacity(const std::string& path, int user) {
  RunResult r("capacity");
  r.inputs = {{"model", path}, {"user", user}};
  const auto model = load_model(path);
  const auto cap = single_user_capacity(model.user(user), model.q(), model.x0());
  r.outputs = {{"capacity", cap.value}, {"argmax", cap.argmax.vector()}, {"zero", cap.zero}};
  if (cap.zero) r.warnings.push_back("user " + std::to_string(user) + " has zero covert capacity");
  emit(r);
  return kExitOk;
}

int cmd_boundary(const std::string& path, std::size_t points, const std::string& format,
                 const std::string& file, const OptimizerFlags& flags) {
  const auto model = load_model(path);
  const auto front = pareto_boundary(model, points, flags.config());

  std::ostringstream os;
  if (format == "csv") {
    os << "L1,L2\n";
    char buf[64];
    for (const auto& p : front.points) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.l1, p.l2);
      os << buf;
    }
  } else {
    RunResult r("boundary");
    r.inputs = {{"model", path}, {"points", points}, {"config", flags.config().to_json()}};
    json pts = json::array(), params = json::array();
    for (const auto& p : front.points) pts.push_back({{"L1", p.l1}, {"L2", p.l2}});
    for (const auto& p : front.params) params.push_back(params_to_json(p));
    r.outputs = {{"points", pts}, {"params", params}, {"meta", front.meta}};
    os << r.to_json().dump(2) << '\n';
  }
  if (file.empty()) {
    std::cout << os.str();
  } else {
    std::ofstream out(file);
    if (!out) throw Error("cannot write '" + file + "'");
    out << os.str();
  }
  return kExitOk;
}

int cmd_gamma(const std::string& path, const OptimizerFlags& flags) {
  RunResult r("gamma");
  r.inputs = {{"model", path}, {"config", flags.config().to_json()}};
  const RegionContext ctx(load_model(path));
  const auto g = gamma_star(ctx, flags.config());
  const auto ts = ts_optimality_condition(ctx.model, g.l1_star, g.l2_star);
  r.outputs = {{"gamma_star", g.gamma},
               {"l1_star", g.l1_star},
               {"l2_star", g.l2_star},
               {"point", {{"L1", g.point.l1}, {"L2", g.point.l2}}},
               {"params", params_to_json(g.params)},
               {"ts_condition", {{"holds", ts.holds}, {"sup_ratio", finite_or_null(ts.sup_ratio)}}}};
  emit(r);
  return kExitOk;
}

int cmd_sweep(const std::string& path, const std::string& format, const OptimizerFlags& flags) {
  const auto family = load_family(path);
  const auto rows = sweep(family, family.values(), flags.config());
  if (format == "csv") {
    std::cout << family.parameter() << ",condition_bit,gamma_star\n";
    for (const auto& row : rows) {
      std::cout << row.param << ',' << (row.condition_bit ? std::to_string(*row.condition_bit ? 1 : 0) : "")
                << ',';
      if (row.gamma_star) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4f", *row.gamma_star);
        std::cout << buf;
      }
      std::cout << '\n';
    }
    return kExitOk;
  }
  RunResult r("sweep");
  r.inputs = {{"family", path}, {"parameter", family.parameter()}, {"values", family.values()},
              {"config", flags.config().to_json()}};
  json table = json::array();
  for (const auto& row : rows) {
    table.push_back(row.to_json());
    if (!row.error.empty()) r.warnings.push_back(row.error);
  }
  r.outputs = {{"rows", table}};
  emit(r);
  return kExitOk;
}

int cmd_verify_taylor(const std::string& path, std::size_t joints, std::uint64_t seed) {
  RunResult r("verify-taylor");
  r.inputs = {{"model", path}, {"joints", joints}, {"seed", seed}};
  taylor::SuiteOptions opt;
  opt.joints = joints;
  opt.seed = seed;
  const auto report = taylor::run_suite(load_model(path), opt);
  r.outputs = report.to_json();
  emit(r);
  return report.passed() ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Covert communication over a degraded broadcast channel with a warden"};
  app.require_subcommand(1);

  std::string model_path;
  auto* validate = app.add_subcommand("validate", "Check model conditions and certify degradedness");
  validate->add_option("model", model_path, "Model JSON file")->required();

  int user = 1;
  auto* capacity = app.add_subcommand("capacity", "Single-user covert capacity");
  capacity->add_option("model", model_path, "Model JSON file")->required();
  capacity->add_option("--user", user, "User index")->check(CLI::IsMember({1, 2}))->capture_default_str();

  std::size_t points = 20;
  std::string format = "json";
  std::string out_file;
  OptimizerFlags flags;
  auto* boundary = app.add_subcommand("boundary", "Sampled boundary of the covert rate region");
  boundary->add_option("model", model_path, "Model JSON file")->required();
  boundary->add_option("--points", points, "Number of boundary points")
      ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()))
      ->capture_default_str();
  boundary->add_option("--out", format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  boundary->add_option("--file", out_file, "Write to this file instead of stdout");
  flags.attach(boundary);

  auto* gamma = app.add_subcommand("gamma", "Improvement of superposition coding over time-sharing");
  gamma->add_option("model", model_path, "Model JSON file")->required();
  flags.attach(gamma);

  std::string family_path;
  auto* sweep_cmd = app.add_subcommand("sweep", "Condition bit and gamma* over a model family");
  sweep_cmd->add_option("family", family_path, "Family JSON file")->required();
  sweep_cmd->add_option("--out", format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  flags.attach(sweep_cmd);

  std::size_t joints = 20;
  std::uint64_t taylor_seed = 1;
  auto* taylor_cmd = app.add_subcommand("verify-taylor", "Finite-difference checks of the small-weight expansion");
  taylor_cmd->add_option("model", model_path, "Model JSON file")->required();
  taylor_cmd->add_option("--joints", joints, "Random structured joints")->capture_default_str();
  taylor_cmd->add_option("--seed", taylor_seed, "Random seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }

  const auto start = std::chrono::steady_clock::now();
  int code = kExitOk;
  try {
    if (*validate) code = cmd_validate(model_path);
    else if (*capacity) code = cmd_capacity(model_path, user);
    else if (*boundary) code = cmd_boundary(model_path, points, format, out_file, flags);
    else if (*gamma) code = cmd_gamma(model_path, flags);
    else if (*sweep_cmd) code = cmd_sweep(family_path, format, flags);
    else if (*taylor_cmd) code = cmd_verify_taylor(model_path, joints, taylor_seed);
  } catch (const ModelError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  std::cerr << "wall time: " << elapsed.count() << " s\n";
  return code;
}

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tvcons/analysis.hpp"
#include "tvcons/dual_norm.hpp"
#include "tvcons/edge_list.hpp"
#include "tvcons/errors.hpp"
#include "tvcons/experiment.hpp"
#include "tvcons/metrics_csv.hpp"

namespace {

using namespace tvcons;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitAnomaly = 2;

struct FieldSource {
  std::string file;
  std::string values;

  NodeFieldd load(const std::string& what) const {
    if (!file.empty() && !values.empty()) throw InvalidFieldError(what + ": give a file or inline values, not both");
    if (!file.empty()) return read_field(std::filesystem::path(file));
    if (!values.empty()) {
      std::istringstream in(values);
      return read_field(in);
    }
    throw InvalidFieldError(what + ": no values given");
  }
};

std::string join(const VertexSet& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? " " : "") + std::to_string(s[i]);
  return out;
}

std::string real(double v) { return format_real(v); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Total-variation consensus toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment described by a JSON config");
  run_cmd->add_option("config", config_path, "Experiment config")->required()->check(CLI::ExistingFile);

  std::string graph_path;
  FieldSource field;
  bool center = false;
  bool bruteforce = false;
  auto* dual_cmd = app.add_subcommand("dualnorm", "Dual TV norm of a mean-zero node field");
  dual_cmd->add_option("--graph", graph_path, "Edge-list file")->required()->check(CLI::ExistingFile);
  dual_cmd->add_option("--field", field.file, "Field file")->check(CLI::ExistingFile);
  dual_cmd->add_option("--values", field.values, "Inline field, comma separated");
  dual_cmd->add_flag("--center", center, "Subtract the mean first");
  dual_cmd->add_flag("--bruteforce", bruteforce, "Also enumerate subsets (small graphs)");

  std::string kind = "quadratic";
  double x_star = 0.0;
  double lambda = 0.0;
  auto* cert_cmd = app.add_subcommand("certify", "Check whether x* 1_V minimizes F + lambda TV");
  cert_cmd->add_option("--graph", graph_path, "Edge-list file")->required()->check(CLI::ExistingFile);
  cert_cmd->add_option("--x0", field.file, "Data field file")->check(CLI::ExistingFile);
  cert_cmd->add_option("--values", field.values, "Inline data, comma separated");
  cert_cmd->add_option("--kind", kind, "quadratic or absolute")
      ->check(CLI::IsMember({"quadratic", "absolute"}));
  cert_cmd->add_option("--x-star", x_star, "Consensus value to certify")->required();
  cert_cmd->add_option("--lambda", lambda, "Regularization weight")->required();

  double a = 0.0;
  Index stubborn_count = 1;
  auto* stub_cmd = app.add_subcommand("predict-stubborn", "Consensus value under a stubborn coalition");
  stub_cmd->add_option("--x0", field.file, "Regular agents' initial values")->check(CLI::ExistingFile);
  stub_cmd->add_option("--values", field.values, "Inline regular values, comma separated");
  stub_cmd->add_option("--a", a, "Stubborn value")->required();
  stub_cmd->add_option("--lambda", lambda, "Regularization weight")->required();
  stub_cmd->add_option("--stubborn-count", stubborn_count, "Number of stubborn agents")
      ->check(CLI::PositiveNumber);
  stub_cmd->add_option("--graph", graph_path, "Graph of the regular agents (checks the precondition)")
      ->check(CLI::ExistingFile);

  auto* crit_cmd = app.add_subcommand("critical-lambda", "Threshold above which consensus is exact");
  crit_cmd->add_option("--graph", graph_path, "Edge-list file")->required()->check(CLI::ExistingFile);
  crit_cmd->add_option("--x0", field.file, "Initial field file (average problem)")->check(CLI::ExistingFile);
  crit_cmd->add_option("--values", field.values, "Inline initial values");
  crit_cmd->add_option("--kind", kind, "quadratic (average) or absolute (median)")
      ->check(CLI::IsMember({"quadratic", "absolute"}));

  std::string type = "complete";
  Index n = 0;
  double p = 0.5;
  std::uint64_t seed = 0;
  std::string out_path;
  auto* gen_cmd = app.add_subcommand("gen-graph", "Write a generated graph as an edge list");
  gen_cmd->add_option("--type", type, "complete, path, cycle or erdos_renyi")
      ->check(CLI::IsMember({"complete", "path", "cycle", "erdos_renyi"}));
  gen_cmd->add_option("--n", n, "Number of vertices")->required();
  gen_cmd->add_option("--p", p, "Edge probability (erdos_renyi)");
  gen_cmd->add_option("--seed", seed, "Seed (erdos_renyi)");
  gen_cmd->add_option("--out", out_path, "Output file (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*run_cmd) {
      const ExperimentConfig config = load_config(config_path);
      const ExperimentResult result = run_experiment(config);
      for (const auto& engine : result.summary["engines"]) {
        std::cout << engine["name"].get<std::string>() << ": iterations=" << engine["iterations"]
                  << " final_mean=" << real(engine["final_mean"].get<double>())
                  << " disagreement=" << real(engine["final_disagreement"].get<double>()) << '\n';
      }
      std::cout << "threshold " << result.summary["threshold"]["regime"].get<std::string>()
                << ", lambda=" << real(result.summary["lambda"].get<double>()) << '\n';
      return result.anomaly ? kExitAnomaly : kExitOk;
    }

    if (*dual_cmd) {
      const Graph g = read_edge_list(std::filesystem::path(graph_path)).graph;
      NodeFieldd u = field.load("field");
      if (center && u.size() > 0) u.array() -= u.mean();
      const auto r = dual_norm(g, u);
      std::cout << "dual_norm " << real(r.value) << '\n'
                << "witness " << join(r.witness_subset) << '\n'
                << "iterations " << r.iterations << '\n';
      if (bruteforce) std::cout << "bruteforce " << real(dual_norm_bruteforce(g, u).value) << '\n';
      if (r.anomaly) {
        std::cerr << "anomaly: ratio iteration exceeded |E| = " << g.num_edges() << " min-cut solves\n";
        return kExitAnomaly;
      }
      return kExitOk;
    }

    if (*cert_cmd) {
      const Graph g = read_edge_list(std::filesystem::path(graph_path)).graph;
      const NodeFieldd x0 = field.load("x0");
      require_node_field(g, x0);
      const AggregateObjective objs = kind == "quadratic" ? AggregateObjective::average_consensus(x0)
                                                          : AggregateObjective::median_consensus(x0);
      const auto cert = certify_consensus_minimizer(g, objs, x_star, lambda);
      std::cout << "verdict " << to_string(cert.verdict) << '\n'
                << "dual_gap " << real(cert.dual_gap) << '\n'
                << "mean_u " << real(cert.mean_u) << '\n'
                << "witness " << join(cert.gap_witness) << '\n';
      return kExitOk;
    }

    if (*stub_cmd) {
      const NodeFieldd x0 = field.load("x0");
      StubbornPrediction pred;
      if (!graph_path.empty()) {
        const Graph g = read_edge_list(std::filesystem::path(graph_path)).graph;
        pred = stubborn_limit(g, x0, a, lambda, stubborn_count);
      } else {
        pred = stubborn_limit(x0, a, lambda, stubborn_count);
      }
      std::cout << "x_star " << real(pred.x_star) << '\n'
                << "case " << to_string(pred.which) << '\n'
                << "regular_mean " << real(pred.regular_mean) << '\n'
                << "margin " << real(pred.margin) << '\n'
                << "precondition " << to_string(pred.precondition) << '\n';
      if (pred.precondition == Precondition::Violated) {
        std::cerr << "warning: lambda is below the critical value of the regular agents ("
                  << real(pred.regular_critical_lambda) << "); the prediction is not guaranteed\n";
      }
      return kExitOk;
    }

    if (*crit_cmd) {
      const Graph g = read_edge_list(std::filesystem::path(graph_path)).graph;
      if (kind == "quadratic") {
        std::cout << "critical_lambda " << real(ac_critical_lambda(g, field.load("x0"))) << '\n';
      } else {
        std::cout << "lambda0_upper " << real(mc_lambda0_upper(g)) << '\n';
        if (g.is_complete() || g.num_vertices() <= 12) {
          std::cout << "lambda0_exact " << real(mc_lambda0_exact(g)) << '\n';
        }
      }
      return kExitOk;
    }

    if (*gen_cmd) {
      Graph g;
      if (type == "complete") {
        g = Graph::complete(n);
      } else if (type == "path") {
        g = Graph::path(n);
      } else if (type == "cycle") {
        g = Graph::cycle(n);
      } else {
        g = Graph::erdos_renyi(n, p, seed);
      }
      if (out_path.empty()) {
        write_edge_list(std::cout, g);
      } else {
        std::ofstream out(out_path);
        if (!out) throw Error("cannot open " + out_path + " for writing");
        write_edge_list(out, g);
      }
      return kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitOk;
}

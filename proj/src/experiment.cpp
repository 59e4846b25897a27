#include "tvcons/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "tvcons/analysis.hpp"
#include "tvcons/dual_norm.hpp"
#include "tvcons/edge_list.hpp"
#include "tvcons/engines.hpp"
#include "tvcons/errors.hpp"
#include "tvcons/gossip.hpp"
#include "tvcons/metrics_csv.hpp"
#include "tvcons/objectives.hpp"
#include "tvcons/operators.hpp"

namespace tvcons {

using nlohmann::json;

namespace {

// Reads the keys of one JSON object, rejecting unknown keys and wrong types.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  [[noreturn]] static void fail(const std::string& field, const std::string& what) {
    throw ConfigError((field.empty() ? std::string("config") : field) + ": " + what);
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* find(const std::string& key) {
    known_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() || it->is_null() ? nullptr : &*it;
  }

  void read(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) fail(field(key), "expected a number");
      out = v->get<double>();
      if (!std::isfinite(out)) fail(field(key), "must be finite");
    }
  }

  void read(const std::string& key, std::optional<double>& out) {
    if (find(key)) {
      double v = 0;
      read(key, v);
      out = v;
    }
  }

  void read(const std::string& key, std::int64_t& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) fail(field(key), "expected an integer");
      out = v->get<std::int64_t>();
    }
  }

  void read(const std::string& key, std::uint64_t& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_unsigned()) fail(field(key), "expected a non-negative integer");
      out = v->get<std::uint64_t>();
    }
  }

  void read(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) fail(field(key), "expected a string");
      out = v->get<std::string>();
    }
  }

  void read(const std::string& key, std::vector<double>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) fail(field(key), "expected an array of numbers");
      out.clear();
      for (std::size_t i = 0; i < v->size(); ++i) {
        const json& e = (*v)[i];
        if (!e.is_number() || !std::isfinite(e.get<double>())) {
          fail(field(key) + "[" + std::to_string(i) + "]", "expected a finite number");
        }
        out.push_back(e.get<double>());
      }
    }
  }

  void read(const std::string& key, std::vector<Vertex>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) fail(field(key), "expected an array of vertex ids");
      out.clear();
      for (std::size_t i = 0; i < v->size(); ++i) {
        const json& e = (*v)[i];
        if (!e.is_number_integer() || e.get<std::int64_t>() < 0) {
          fail(field(key) + "[" + std::to_string(i) + "]", "expected a vertex id");
        }
        out.push_back(e.get<Vertex>());
      }
    }
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!known_.count(key)) fail(field(key), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> known_;
};

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) ObjectReader::fail(field, what);
}

GraphConfig parse_graph(const json& j, std::uint64_t default_seed) {
  GraphConfig g;
  g.seed = default_seed;
  ObjectReader r(j, "graph");
  r.read("generator", g.generator);
  std::int64_t n = 0;
  r.read("n", n);
  g.n = n;
  r.read("p", g.p);
  r.read("seed", g.seed);
  r.read("path", g.path);
  r.finish();
  static const std::set<std::string> generators{"complete", "path", "cycle", "erdos_renyi",
                                                "edge_list"};
  require(generators.count(g.generator) == 1, "graph.generator",
          "expected complete, path, cycle, erdos_renyi or edge_list");
  if (g.generator == "edge_list") {
    require(!g.path.empty(), "graph.path", "required for generator edge_list");
  } else {
    require(g.n >= 1, "graph.n", "must be a positive integer");
    require(g.generator != "cycle" || g.n >= 3, "graph.n", "a cycle needs at least 3 vertices");
  }
  require(g.p >= 0.0 && g.p <= 1.0, "graph.p", "must lie in [0, 1]");
  return g;
}

DataConfig parse_data(const json& j, std::uint64_t default_seed) {
  DataConfig d;
  d.seed = default_seed;
  ObjectReader r(j, "objective.data");
  r.read("values", d.values);
  r.read("low", d.low);
  r.read("high", d.high);
  r.read("seed", d.seed);
  if (const json* o = r.find("outliers")) {
    ObjectReader ro(*o, "objective.data.outliers");
    std::int64_t count = 0;
    ro.read("count", count);
    d.outliers.count = count;
    ro.read("low", d.outliers.low);
    ro.read("high", d.outliers.high);
    ro.finish();
    require(count >= 0, "objective.data.outliers.count", "must be non-negative");
    require(d.outliers.low <= d.outliers.high, "objective.data.outliers", "low must not exceed high");
  }
  r.finish();
  require(d.low <= d.high, "objective.data", "low must not exceed high");
  return d;
}

EngineConfig parse_engine(const json& j, std::size_t i) {
  const std::string path = "engines[" + std::to_string(i) + "]";
  EngineConfig e;
  ObjectReader r(j, path);
  r.read("type", e.type);
  r.read("name", e.name);
  r.read("rho", e.rho);
  r.read("gamma0", e.gamma0);
  r.read("exponent", e.exponent);
  r.read("max_iterations", e.max_iterations);
  r.read("disagreement_tolerance", e.disagreement_tolerance);
  r.read("change_tolerance", e.change_tolerance);
  r.read("record_every", e.record_every);
  r.finish();
  require(e.type == "admm" || e.type == "subgradient" || e.type == "gossip", path + ".type",
          "expected admm, subgradient or gossip");
  if (e.name.empty()) e.name = e.type;
  require(e.name.find_first_of("/\\") == std::string::npos && e.name != "." && e.name != ".." &&
              e.name != "summary",
          path + ".name", "must be a plain file stem");
  require(e.rho > 0, path + ".rho", "must be positive");
  require(e.gamma0 > 0, path + ".gamma0", "must be positive");
  require(e.exponent > 0.5 && e.exponent <= 1.0, path + ".exponent", "must lie in (0.5, 1]");
  require(e.max_iterations >= 0, path + ".max_iterations", "must be non-negative");
  require(e.disagreement_tolerance >= 0, path + ".disagreement_tolerance", "must be non-negative");
  require(e.change_tolerance >= 0, path + ".change_tolerance", "must be non-negative");
  require(e.record_every >= 1, path + ".record_every", "must be at least 1");
  return e;
}

// 53 random bits mapped to [0, 1); identical on every platform for a given seed.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

NodeFieldd generate_data(const DataConfig& d, Index n) {
  if (!d.values.empty()) {
    if (static_cast<Index>(d.values.size()) != n) {
      ObjectReader::fail("objective.data.values", "expected " + std::to_string(n) + " values, got " +
                                                      std::to_string(d.values.size()));
    }
    return Eigen::Map<const NodeFieldd>(d.values.data(), n);
  }
  require(d.outliers.count <= n, "objective.data.outliers.count", "exceeds the number of vertices");
  std::mt19937_64 rng(d.seed);
  NodeFieldd x(n);
  for (Index v = 0; v < n; ++v) x(v) = d.low + (d.high - d.low) * unit_uniform(rng);
  // Outliers replace a seeded random choice of positions.
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  for (Index k = 0; k < d.outliers.count; ++k) {
    const auto j = k + static_cast<Index>(rng() % static_cast<std::uint64_t>(n - k));
    std::swap(order[k], order[j]);
    x(order[k]) = d.outliers.low + (d.outliers.high - d.outliers.low) * unit_uniform(rng);
  }
  return x;
}

bool is_average(const ExperimentConfig& c) { return c.objective == "quadratic"; }

AggregateObjective make_objectives(const ExperimentConfig& c, const NodeFieldd& x0) {
  return is_average(c) ? AggregateObjective::average_consensus(x0)
                       : AggregateObjective::median_consensus(x0);
}

// Field restricted to the regular agents together with G(R).
struct RegularPart {
  Graph graph;
  NodeFieldd x0;
};

RegularPart regular_part(const Graph& g, const VertexSet& stubborn, const NodeFieldd& x0) {
  const auto mask = membership_mask(g, stubborn);
  VertexSet regular;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (!mask[v]) regular.push_back(v);
  }
  RegularPart part{g.induced_subgraph(regular), NodeFieldd(static_cast<Index>(regular.size()))};
  for (std::size_t i = 0; i < regular.size(); ++i) part.x0(static_cast<Index>(i)) = x0(regular[i]);
  return part;
}

// Critical lambda of the problem: ||x0 - mean||_* (average) or the lambda_0
// bound (median), on G(R) when stubborn agents are present.
struct Threshold {
  std::optional<double> value;
  std::optional<double> exact;  ///< exact lambda_0 for the median problem when affordable
  bool anomaly = false;
};

Threshold critical_threshold(const ExperimentConfig& c, const Graph& g, const VertexSet& stubborn,
                             const NodeFieldd& x0) {
  Threshold t;
  const RegularPart part = regular_part(g, stubborn, x0);
  if (part.graph.num_vertices() == 0 || !part.graph.is_connected()) return t;
  if (is_average(c)) {
    NodeFieldd centered = part.x0;
    centered.array() -= centered.mean();
    const auto r = dual_norm(part.graph, centered);
    t.value = r.value;
    t.anomaly = r.anomaly;
  } else {
    t.value = mc_lambda0_upper(part.graph);
    if (part.graph.is_complete() || part.graph.num_vertices() <= 12) {
      t.exact = mc_lambda0_exact(part.graph);
    }
  }
  return t;
}

// Final states farther than this from the consensus line are not certified.
constexpr double kConsensusTolerance = 1e-6;

json interval_json(const Interval& iv) { return json::array({iv.lo, iv.hi}); }

}  // namespace

ExperimentConfig parse_config(const json& j) {
  ExperimentConfig c;
  ObjectReader r(j, "");
  r.read("seed", c.seed);
  const json* graph = r.find("graph");
  require(graph != nullptr, "graph", "required");
  c.graph = parse_graph(*graph, c.seed);

  if (const json* obj = r.find("objective")) {
    ObjectReader ro(*obj, "objective");
    ro.read("kind", c.objective);
    c.data.seed = c.seed;
    if (const json* data = ro.find("data")) c.data = parse_data(*data, c.seed);
    ro.finish();
    require(c.objective == "quadratic" || c.objective == "absolute", "objective.kind",
            "expected quadratic or absolute");
  } else {
    c.data.seed = c.seed;
  }

  const json* lambda = r.find("lambda");
  require(lambda != nullptr, "lambda", "required");
  if (lambda->is_number()) {
    c.lambda.value = lambda->get<double>();
  } else {
    ObjectReader rl(*lambda, "lambda");
    rl.read("value", c.lambda.value);
    rl.read("critical_multiplier", c.lambda.critical_multiplier);
    rl.finish();
  }
  require(c.lambda.value.has_value() != c.lambda.critical_multiplier.has_value(), "lambda",
          "give exactly one of value or critical_multiplier");
  if (c.lambda.value) require(*c.lambda.value > 0, "lambda.value", "must be positive");
  if (c.lambda.critical_multiplier) {
    require(*c.lambda.critical_multiplier > 0, "lambda.critical_multiplier", "must be positive");
  }

  const json* engines = r.find("engines");
  require(engines != nullptr && engines->is_array() && !engines->empty(), "engines",
          "expected a non-empty array");
  std::set<std::string> names;
  for (std::size_t i = 0; i < engines->size(); ++i) {
    c.engines.push_back(parse_engine((*engines)[i], i));
    require(names.insert(c.engines.back().name).second,
            "engines[" + std::to_string(i) + "].name", "duplicate engine name");
  }

  if (const json* s = r.find("stubborn")) {
    ObjectReader rs(*s, "stubborn");
    rs.read("vertices", c.stubborn.vertices);
    rs.read("values", c.stubborn.values);
    rs.finish();
    require(c.stubborn.values.size() == c.stubborn.vertices.size() ||
                (c.stubborn.values.size() == 1 && !c.stubborn.vertices.empty()) ||
                (c.stubborn.values.empty()),
            "stubborn.values", "expected one value per vertex or a single shared value");
  }
  r.read("output_dir", c.output_dir);
  r.finish();
  require(!c.output_dir.empty(), "output_dir", "must not be empty");
  return c;
}

ExperimentConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("syntax error: ") + e.what());
  }
  return parse_config(j);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    ExperimentConfig c = parse_config_text(buf.str());
    c.base_dir = path.parent_path();
    return c;
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["graph"] = {{"generator", c.graph.generator}, {"n", c.graph.n}, {"p", c.graph.p},
                {"seed", c.graph.seed}, {"path", c.graph.path}};
  json data = {{"values", c.data.values}, {"low", c.data.low}, {"high", c.data.high},
               {"seed", c.data.seed},
               {"outliers", {{"count", c.data.outliers.count},
                             {"low", c.data.outliers.low},
                             {"high", c.data.outliers.high}}}};
  j["objective"] = {{"kind", c.objective}, {"data", data}};
  json lambda = json::object();
  if (c.lambda.value) lambda["value"] = *c.lambda.value;
  if (c.lambda.critical_multiplier) lambda["critical_multiplier"] = *c.lambda.critical_multiplier;
  j["lambda"] = lambda;
  j["engines"] = json::array();
  for (const auto& e : c.engines) {
    j["engines"].push_back({{"name", e.name}, {"type", e.type}, {"rho", e.rho},
                            {"gamma0", e.gamma0}, {"exponent", e.exponent},
                            {"max_iterations", e.max_iterations},
                            {"disagreement_tolerance", e.disagreement_tolerance},
                            {"change_tolerance", e.change_tolerance},
                            {"record_every", e.record_every}});
  }
  j["stubborn"] = {{"vertices", c.stubborn.vertices}, {"values", c.stubborn.values}};
  j["output_dir"] = c.output_dir;
  return j;
}

Scenario build_scenario(const ExperimentConfig& c) {
  Scenario s;
  const GraphConfig& gc = c.graph;
  try {
    if (gc.generator == "complete") {
      s.graph = Graph::complete(gc.n);
    } else if (gc.generator == "path") {
      s.graph = Graph::path(gc.n);
    } else if (gc.generator == "cycle") {
      s.graph = Graph::cycle(gc.n);
    } else if (gc.generator == "erdos_renyi") {
      s.graph = Graph::erdos_renyi(gc.n, gc.p, gc.seed);
    } else {
      std::filesystem::path p = gc.path;
      if (p.is_relative()) p = c.base_dir / p;
      s.graph = read_edge_list(p).graph;
    }
  } catch (const InvalidGraphError& e) {
    throw ConfigError(std::string("graph: ") + e.what());
  }
  const Index n = s.graph.num_vertices();
  require(n >= 1, "graph", "has no vertices");
  s.x0 = generate_data(c.data, n);

  for (std::size_t i = 0; i < c.stubborn.vertices.size(); ++i) {
    const Vertex v = c.stubborn.vertices[i];
    require(v >= 0 && v < n, "stubborn.vertices[" + std::to_string(i) + "]",
            "vertex " + std::to_string(v) + " is not in V");
    if (!c.stubborn.values.empty()) {
      s.x0(v) = c.stubborn.values.size() == 1 ? c.stubborn.values[0] : c.stubborn.values[i];
    }
  }
  s.stubborn = make_vertex_set(s.graph, c.stubborn.vertices);
  require(static_cast<Index>(s.stubborn.size()) < n, "stubborn.vertices",
          "at least one regular agent is required");

  if (c.lambda.value) {
    s.lambda = *c.lambda.value;
  } else {
    const Threshold t = critical_threshold(c, s.graph, s.stubborn, s.x0);
    require(t.value.has_value(), "lambda.critical_multiplier",
            "the critical value needs a connected regular subgraph");
    s.lambda = *c.lambda.critical_multiplier * *t.value;
    require(s.lambda > 0, "lambda.critical_multiplier",
            "the critical value is zero; give lambda.value instead");
  }
  return s;
}

ExperimentResult run_experiment(const ExperimentConfig& c) {
  const Scenario s = build_scenario(c);
  const Graph& g = s.graph;
  const AggregateObjective objs = make_objectives(c, s.x0);
  const AgentRoles roles(g, s.stubborn, s.x0);

  ExperimentResult result;
  json& summary = result.summary;
  summary["config"] = to_json(c);
  summary["problem"] = is_average(c) ? "average" : "median";
  summary["graph"] = {{"vertices", g.num_vertices()}, {"edges", g.num_edges()},
                      {"connected", g.is_connected()}, {"complete", g.is_complete()}};
  summary["lambda"] = s.lambda;
  summary["x0"] = {{"mean", s.x0.mean()}, {"median", interval_json(median_interval(s.x0))},
                   {"min", s.x0.minCoeff()}, {"max", s.x0.maxCoeff()}};

  const Threshold t = critical_threshold(c, g, s.stubborn, s.x0);
  result.anomaly = result.anomaly || t.anomaly;
  json threshold = json::object();
  threshold["kind"] = is_average(c) ? "critical_lambda" : "lambda0_upper";
  threshold["graph"] = s.stubborn.empty() ? "G" : "G(R)";
  threshold["value"] = t.value ? json(*t.value) : json(nullptr);
  if (t.exact) threshold["lambda0_exact"] = *t.exact;
  if (is_average(c) && t.value) {
    threshold["regime"] = s.lambda >= *t.value ? "supercritical" : "subcritical";
  } else if (t.exact) {
    // Above lambda_0 the median problem is guaranteed; at lambda_0 itself it is not.
    threshold["regime"] = s.lambda > *t.exact ? "supercritical" : "subcritical";
  } else if (t.value && s.lambda > *t.value) {
    threshold["regime"] = "supercritical";
  } else {
    threshold["regime"] = "undetermined";
  }
  summary["threshold"] = threshold;

  std::optional<StubbornPrediction> prediction;
  const bool coalition = is_full_stubborn_coalition(g, s.stubborn, s.x0);
  if (coalition && is_average(c)) {
    const RegularPart part = regular_part(g, s.stubborn, s.x0);
    prediction = stubborn_limit(part.graph, part.x0, s.x0(s.stubborn.front()), s.lambda,
                                static_cast<Index>(s.stubborn.size()));
    summary["stubborn"] = {{"vertices", s.stubborn},
                           {"full_coalition", true},
                           {"prediction", prediction->x_star},
                           {"case", to_string(prediction->which)},
                           {"margin", prediction->margin},
                           {"regular_mean", prediction->regular_mean},
                           {"precondition", to_string(prediction->precondition)}};
  } else if (!s.stubborn.empty()) {
    summary["stubborn"] = {{"vertices", s.stubborn}, {"full_coalition", coalition},
                           {"prediction", nullptr}};
  }

  std::filesystem::path out_dir = c.output_dir;
  if (out_dir.is_relative() && !c.base_dir.empty()) out_dir = c.base_dir / out_dir;
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create " + out_dir.string() + ": " + ec.message());

  summary["engines"] = json::array();
  for (const EngineConfig& e : c.engines) {
    EngineSpec spec;
    if (e.type == "admm") {
      spec = AdmmSpec{e.rho};
    } else if (e.type == "subgradient") {
      spec = SubgradientSpec{StepSchedule{e.gamma0, e.exponent}};
    } else {
      spec = GossipSpec{};
    }
    StopRule stop;
    stop.max_iterations = e.max_iterations;
    stop.disagreement_tolerance = e.disagreement_tolerance;
    stop.change_tolerance = e.change_tolerance;
    stop.record_every = e.record_every;
    const Trajectory traj = run(spec, g, objs, s.lambda, s.x0, roles, stop);

    const std::filesystem::path csv = out_dir / (e.name + ".csv");
    emit_csv(to_rows(traj.rows), csv);
    result.csv_paths.push_back(csv);

    const NodeFieldd& x = traj.final_state;
    json entry = {{"name", e.name},
                  {"type", e.type},
                  {"csv", csv.filename().string()},
                  {"iterations", traj.iterations},
                  {"converged", traj.converged},
                  {"final_mean", x.mean()},
                  {"final_min", x.minCoeff()},
                  {"final_max", x.maxCoeff()},
                  {"final_disagreement", disagreement(x)},
                  {"final_objective", traj.rows.back().objective}};
    if (!x.allFinite()) {
      result.anomaly = true;
      entry["anomaly"] = "non-finite state";
    }

    if (!s.stubborn.empty()) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (Vertex v : roles.regular()) {
        lo = std::min(lo, x(v));
        hi = std::max(hi, x(v));
      }
      entry["regular_range"] = json::array({lo, hi});
      if (prediction && e.type != "gossip") {
        entry["stubborn_error"] = std::max(std::abs(lo - prediction->x_star),
                                           std::abs(hi - prediction->x_star));
      }
      if (e.type == "gossip") {
        const GossipMatrix w = GossipMatrix::uniform_averaging(g, s.stubborn);
        if (w.every_regular_reaches_stubborn()) {
          NodeFieldd xs(static_cast<Index>(s.stubborn.size()));
          for (std::size_t i = 0; i < s.stubborn.size(); ++i) xs(static_cast<Index>(i)) = s.x0(s.stubborn[i]);
          const NodeFieldd limit = gossip_limit(w, xs);
          double err = 0;
          const auto& reg = roles.regular();
          for (std::size_t i = 0; i < reg.size(); ++i) {
            err = std::max(err, std::abs(x(reg[i]) - limit(static_cast<Index>(i))));
          }
          entry["gossip_limit_error"] = err;
        }
      }
    } else if (e.type != "gossip" && g.is_connected()) {
      if (disagreement(x) > kConsensusTolerance) {
        entry["certificate"] = {{"verdict", "off_consensus"}};
        summary["engines"].push_back(entry);
        continue;
      }
      const OptimalityCertificate cert = certify_consensus_minimizer(g, objs, x.mean(), s.lambda);
      entry["certificate"] = {{"x_star", cert.x_star},
                              {"verdict", to_string(cert.verdict)},
                              {"dual_gap", cert.dual_gap}};
    }
    summary["engines"].push_back(entry);
  }

  const std::filesystem::path summary_path = out_dir / "summary.json";
  std::ofstream out(summary_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + summary_path.string() + " for writing");
  out << summary.dump(2) << '\n';
  if (!out) throw Error("write failed for " + summary_path.string());
  return result;
}

}  // namespace tvcons

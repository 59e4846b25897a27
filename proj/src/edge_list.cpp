#include "tvcons/edge_list.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "tvcons/errors.hpp"

namespace tvcons {

namespace {

std::optional<Vertex> as_id(const std::string& s) {
  Vertex v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v < 0) return std::nullopt;
  return v;
}

}  // namespace

LabeledGraph read_edge_list(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> raw;
  std::vector<int> line_of;
  std::optional<Index> declared_n;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      std::istringstream comment(line.substr(hash + 1));
      std::string key;
      comment >> key;
      if (key.rfind("n=", 0) == 0) {
        auto n = as_id(key.substr(2));
        if (!n) throw InvalidGraphError("line " + std::to_string(lineno) + ": bad vertex count");
        declared_n = *n;
      }
      line.resize(hash);
    }
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a)) continue;
    if (!(fields >> b) || (fields >> extra)) {
      throw InvalidGraphError("line " + std::to_string(lineno) + ": expected exactly two vertex labels");
    }
    raw.emplace_back(a, b);
    line_of.push_back(lineno);
  }

  const bool numeric = std::all_of(raw.begin(), raw.end(), [](const auto& e) {
    return as_id(e.first) && as_id(e.second);
  });

  LabeledGraph out;
  std::vector<std::pair<Vertex, Vertex>> edges;
  Index n = 0;
  if (numeric) {
    for (const auto& [a, b] : raw) {
      edges.emplace_back(*as_id(a), *as_id(b));
      n = std::max({n, edges.back().first + 1, edges.back().second + 1});
    }
    if (declared_n) {
      if (*declared_n < n) throw InvalidGraphError("declared vertex count smaller than largest id");
      n = *declared_n;
    }
    for (Index v = 0; v < n; ++v) out.labels.push_back(std::to_string(v));
  } else {
    std::unordered_map<std::string, Vertex> ids;
    auto id_of = [&](const std::string& label) {
      auto [it, fresh] = ids.emplace(label, static_cast<Vertex>(out.labels.size()));
      if (fresh) out.labels.push_back(label);
      return it->second;
    };
    for (const auto& [a, b] : raw) {
      const Vertex u = id_of(a);
      edges.emplace_back(u, id_of(b));
    }
    n = static_cast<Index>(out.labels.size());
  }

  try {
    out.graph = Graph(n, edges);
  } catch (const InvalidGraphError& e) {
    // Locate the first offending line for the diagnostic.
    for (std::size_t i = 0; i < edges.size(); ++i) {
      std::vector<std::pair<Vertex, Vertex>> prefix(edges.begin(), edges.begin() + i + 1);
      try {
        Graph(n, prefix);
      } catch (const InvalidGraphError&) {
        throw InvalidGraphError("line " + std::to_string(line_of[i]) + ": " + e.what());
      }
    }
    throw;
  }
  return out;
}

LabeledGraph read_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidGraphError("cannot open edge list " + path.string());
  try {
    return read_edge_list(in);
  } catch (const InvalidGraphError& e) {
    throw InvalidGraphError(path.string() + ": " + e.what());
  }
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "# n=" << g.num_vertices() << '\n';
  for (const auto& e : g.edges()) out << e.tail << ' ' << e.head << '\n';
}

NodeFieldd read_field(std::istream& in) {
  std::vector<double> values;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    std::string tok;
    while (fields >> tok) {
      double v = 0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw InvalidFieldError("line " + std::to_string(lineno) + ": '" + tok + "' is not a number");
      }
      values.push_back(v);
    }
  }
  return Eigen::Map<NodeFieldd>(values.data(), static_cast<Index>(values.size()));
}

NodeFieldd read_field(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidFieldError("cannot open field file " + path.string());
  return read_field(in);
}

}  // namespace tvcons

#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "spinlearn/error.hpp"
#include "spinlearn/polynomial.hpp"

namespace spinlearn {

/// Undirected simple graph on vertices [0, n).
class Graph {
 public:
  using Edge = std::pair<std::uint32_t, std::uint32_t>;

  Graph() = default;
  explicit Graph(std::size_t n) : n_(n), adj_(n) {}

  std::size_t n() const noexcept { return n_; }
  std::size_t max_degree() const noexcept { return d_; }
  const std::set<Edge>& edges() const noexcept { return edges_; }
  std::size_t degree(std::size_t v) const { return adj_.at(v).size(); }
  const std::vector<std::uint32_t>& neighbors(std::size_t v) const { return adj_.at(v); }

  bool has_edge(std::uint32_t u, std::uint32_t v) const {
    if (u > v) std::swap(u, v);
    return edges_.count({u, v}) > 0;
  }

  // Returns false when the edge was already present.
  bool add_edge(std::uint32_t u, std::uint32_t v) {
    if (u >= n_ || v >= n_) throw ConfigError("edge endpoint out of range");
    if (u == v) throw ConfigError("self-loops are not allowed");
    if (u > v) std::swap(u, v);
    if (!edges_.insert({u, v}).second) return false;
    insert_sorted(adj_[u], v);
    insert_sorted(adj_[v], u);
    d_ = std::max({d_, adj_[u].size(), adj_[v].size()});
    return true;
  }

  void add_clique(const Monomial& s) {
    auto idx = s.indices();
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a + 1; b < idx.size(); ++b) add_edge(idx[a], idx[b]);
  }

  /// All cliques of size 1..t, in lexicographic order.
  std::vector<Monomial> cliques(std::size_t t) const {
    std::vector<Monomial> out;
    std::vector<std::uint32_t> current;
    for (std::uint32_t v = 0; v < n_; ++v) {
      current.assign(1, v);
      extend(current, t, out);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

 private:
  static void insert_sorted(std::vector<std::uint32_t>& v, std::uint32_t x) {
    v.insert(std::lower_bound(v.begin(), v.end(), x), x);
  }

  // Grows a clique by neighbours larger than its last vertex that are adjacent to every member.
  void extend(std::vector<std::uint32_t>& current, std::size_t t, std::vector<Monomial>& out) const {
    out.emplace_back(current);
    if (current.size() == t) return;
    for (auto w : adj_[current.back()]) {
      if (w <= current.back()) continue;
      bool all = true;
      for (std::size_t k = 0; k + 1 < current.size() && all; ++k) all = has_edge(current[k], w);
      if (!all) continue;
      current.push_back(w);
      extend(current, t, out);
      current.pop_back();
    }
  }

  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::set<Edge> edges_;
  std::vector<std::vector<std::uint32_t>> adj_;
};

inline Graph complete_graph(std::size_t n) {
  Graph g(n);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

inline Graph path_graph(std::size_t n) {
  Graph g(n);
  for (std::uint32_t i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

inline Graph grid_graph(std::size_t rows, std::size_t cols) {
  Graph g(rows * cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const auto v = static_cast<std::uint32_t>(r * cols + c);
      if (c + 1 < cols) g.add_edge(v, v + 1);
      if (r + 1 < rows) g.add_edge(v, static_cast<std::uint32_t>(v + cols));
    }
  return g;
}

/// Circulant d-regular graph: i ~ i +- k for k <= d/2, plus the antipode when d is odd.
inline Graph regular_graph(std::size_t n, std::size_t d) {
  if (d >= n) throw ConfigError("regular graph needs d < n");
  if (d % 2 == 1 && n % 2 == 1) throw ConfigError("odd-degree regular graph needs an even vertex count");
  Graph g(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 1; k <= d / 2; ++k)
      g.add_edge(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>((i + k) % n));
    if (d % 2 == 1) g.add_edge(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>((i + n / 2) % n));
  }
  return g;
}

/// Edge list text: first non-comment line may be "n <count>"; each other line is "u v".
inline Graph parse_edge_list(std::istream& in, std::size_t n_hint = 0) {
  std::vector<Graph::Edge> edges;
  std::size_t n = n_hint;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string first;
    ls >> first;
    if (first.empty()) continue;
    if (first == "n") {
      ls >> n;
      continue;
    }
    long long u = 0;
    long long v = 0;
    try {
      u = std::stoll(first);
    } catch (const std::exception&) {
      throw ConfigError("malformed edge list line: " + line);
    }
    if (!(ls >> v) || u < 0 || v < 0) throw ConfigError("malformed edge list line: " + line);
    edges.emplace_back(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v));
    n = std::max<std::size_t>(n, static_cast<std::size_t>(std::max(u, v)) + 1);
  }
  Graph g(n);
  for (auto [u, v] : edges) g.add_edge(u, v);
  return g;
}

/// complete:n, regular:n:d, grid:rows:cols, path:n, empty:n, or edges:<path>.
inline Graph named_graph(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  auto num = [&](std::size_t k) -> std::size_t {
    if (k >= parts.size()) throw ConfigError("graph spec '" + spec + "' is missing a field");
    try {
      return static_cast<std::size_t>(std::stoull(parts[k]));
    } catch (const std::exception&) {
      throw ConfigError("graph spec '" + spec + "' has a non-numeric field");
    }
  };
  if (parts.empty()) throw ConfigError("empty graph spec");
  const auto& kind = parts[0];
  if (kind == "complete") return complete_graph(num(1));
  if (kind == "regular") return regular_graph(num(1), num(2));
  if (kind == "grid") return grid_graph(num(1), num(2));
  if (kind == "path") return path_graph(num(1));
  if (kind == "empty") return Graph(num(1));
  if (kind == "edges") {
    std::ifstream f(spec.substr(6));
    if (!f) throw ConfigError("cannot open edge list " + spec.substr(6));
    return parse_edge_list(f);
  }
  throw ConfigError("unknown graph kind '" + kind + "'");
}

struct StructureScore {
  double precision = 1.0;
  double recall = 1.0;
  bool exact = true;
};

inline StructureScore score_structure(const Graph& truth, const Graph& estimate) {
  std::size_t hit = 0;
  for (const auto& e : estimate.edges()) hit += truth.edges().count(e);
  StructureScore s;
  s.precision = estimate.edges().empty() ? 1.0 : double(hit) / double(estimate.edges().size());
  s.recall = truth.edges().empty() ? 1.0 : double(hit) / double(truth.edges().size());
  s.exact = truth.edges() == estimate.edges();
  return s;
}

/// Dependency graph of a polynomial: the union of cliques over its monomials.
inline Graph dependency_graph(const Polynomial& p) {
  Graph g(p.n());
  for (const auto& [s, c] : p.terms()) g.add_clique(s);
  return g;
}

}  // namespace spinlearn

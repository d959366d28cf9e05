#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "grgsimple/errors.hpp"
#include "grgsimple/geometry.hpp"
#include "grgsimple/random.hpp"

namespace grgsimple {

using NodeId = std::uint32_t;

struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline Edge make_edge(NodeId a, NodeId b) noexcept { return a < b ? Edge{a, b} : Edge{b, a}; }

// Immutable simple undirected graph in compressed adjacency form.
// Neighbour lists are sorted ascending; no loops, no parallel edges.
class Graph {
 public:
  Graph() : offsets_(1, 0) {}

  // Edges may come in any order and orientation; duplicates and loops are rejected.
  static Graph from_edges(std::size_t node_count, std::span<const Edge> edges) {
    Graph g;
    g.offsets_.assign(node_count + 1, 0);
    for (const auto& e : edges) {
      if (e.u >= node_count || e.v >= node_count) throw ParameterError("edge endpoint out of range");
      if (e.u == e.v) throw ParameterError("self-loop in edge list");
      ++g.offsets_[e.u + 1];
      ++g.offsets_[e.v + 1];
    }
    std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
    g.neighbors_.resize(g.offsets_.back());
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const auto& e : edges) {
      g.neighbors_[cursor[e.u]++] = e.v;
      g.neighbors_[cursor[e.v]++] = e.u;
    }
    for (std::size_t v = 0; v < node_count; ++v) {
      auto first = g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]);
      auto last = g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]);
      std::sort(first, last);
      if (std::adjacent_find(first, last) != last) throw ParameterError("duplicate edge in edge list");
    }
    g.edge_count_ = edges.size();
    return g;
  }

  std::size_t node_count() const noexcept { return offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return edge_count_; }

  std::span<const NodeId> neighbors(NodeId v) const noexcept {
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }
  std::size_t degree(NodeId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

  bool has_edge(NodeId a, NodeId b) const noexcept {
    if (degree(a) > degree(b)) std::swap(a, b);
    const auto nb = neighbors(a);
    return std::binary_search(nb.begin(), nb.end(), b);
  }

  // All edges as (u < v), sorted lexicographically.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (NodeId u = 0; u < node_count(); ++u)
      for (NodeId v : neighbors(u))
        if (u < v) out.push_back({u, v});
    return out;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> neighbors_;
  std::size_t edge_count_ = 0;
};

struct GeometricGraph {
  PointSet points;
  double radius = 0.0;
  Graph topology;

  std::size_t node_count() const noexcept { return topology.node_count(); }
};

struct RegularGraph {
  std::size_t degree = 0;
  Graph topology;

  std::size_t node_count() const noexcept { return topology.node_count(); }
};

inline const Graph& topology_of(const Graph& g) noexcept { return g; }
inline const Graph& topology_of(const GeometricGraph& g) noexcept { return g.topology; }
inline const Graph& topology_of(const RegularGraph& g) noexcept { return g.topology; }

// Hop count with an explicit unreachable state; never compares equal to a finite count.
class HopCount {
 public:
  constexpr HopCount() noexcept = default;
  constexpr explicit HopCount(std::uint32_t hops) noexcept : hops_(static_cast<std::int64_t>(hops)) {}
  static constexpr HopCount unreachable() noexcept { return HopCount(kUnreachable, 0); }

  constexpr bool reachable() const noexcept { return hops_ != kUnreachable; }
  std::uint32_t value() const {
    if (!reachable()) throw ConnectivityError("hop count is unreachable");
    return static_cast<std::uint32_t>(hops_);
  }

  friend constexpr bool operator==(const HopCount&, const HopCount&) = default;

 private:
  static constexpr std::int64_t kUnreachable = -1;
  constexpr HopCount(std::int64_t raw, int) noexcept : hops_(raw) {}
  std::int64_t hops_ = kUnreachable;
};

inline std::ostream& operator<<(std::ostream& os, const HopCount& h) {
  return h.reachable() ? (os << h.value()) : (os << "unreachable");
}

struct DistanceVector {
  NodeId source = 0;
  std::vector<HopCount> dist;
};

namespace detail {

inline constexpr std::int32_t kNoPath = -1;

// Single-source BFS into a caller-provided buffer; unreachable nodes get kNoPath.
inline void bfs_into(const Graph& g, NodeId source, std::span<std::int32_t> dist, std::vector<NodeId>& queue) {
  std::fill(dist.begin(), dist.end(), kNoPath);
  queue.clear();
  queue.reserve(g.node_count());
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId u = queue[head];
    const std::int32_t next = dist[u] + 1;
    for (NodeId w : g.neighbors(u)) {
      if (dist[w] == kNoPath) {
        dist[w] = next;
        queue.push_back(w);
      }
    }
  }
}

inline void check_node(const Graph& g, NodeId v) {
  if (v >= g.node_count()) throw ParameterError("node index " + std::to_string(v) + " out of range");
}

}  // namespace detail

inline DistanceVector bfs(const Graph& g, NodeId source) {
  detail::check_node(g, source);
  std::vector<std::int32_t> raw(g.node_count());
  std::vector<NodeId> queue;
  detail::bfs_into(g, source, raw, queue);
  DistanceVector out{source, {}};
  out.dist.reserve(raw.size());
  for (auto d : raw) out.dist.push_back(d == detail::kNoPath ? HopCount::unreachable() : HopCount(static_cast<std::uint32_t>(d)));
  return out;
}

inline bool is_connected(const Graph& g) {
  if (g.node_count() <= 1) return true;
  std::vector<std::int32_t> raw(g.node_count());
  std::vector<NodeId> queue;
  detail::bfs_into(g, 0, raw, queue);
  return queue.size() == g.node_count();
}

inline double mean_degree(const Graph& g) noexcept {
  return g.node_count() == 0 ? 0.0 : 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.node_count());
}

// Radius-r graph (closed ball: d <= r) using a uniform cell grid. Cells are at
// least r wide, so every neighbour of a point lies in its 3x3 cell block.
inline GeometricGraph build_grg(PointSet ps, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw ParameterError("radius must be positive");
  const Domain domain = ps.domain;
  const bool torus = domain.boundary() == Boundary::Torus;
  const std::size_t n = ps.size();
  const double side = domain.side();

  const std::size_t cells = side > 0.0 ? std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(side / r))) : 1;
  const double width = side > 0.0 ? side / static_cast<double>(cells) : 1.0;
  const auto cell_of = [&](double c) {
    return std::min(cells - 1, static_cast<std::size_t>(c / width));
  };

  // Counting sort of points into cells.
  std::vector<std::size_t> start(cells * cells + 1, 0);
  std::vector<std::size_t> cell_index(n);
  for (std::size_t i = 0; i < n; ++i) {
    cell_index[i] = cell_of(ps.points[i].y) * cells + cell_of(ps.points[i].x);
    ++start[cell_index[i] + 1];
  }
  std::partial_sum(start.begin(), start.end(), start.begin());
  std::vector<NodeId> members(n);
  {
    std::vector<std::size_t> cursor(start.begin(), start.end() - 1);
    for (std::size_t i = 0; i < n; ++i) members[cursor[cell_index[i]]++] = static_cast<NodeId>(i);
  }

  std::vector<Edge> edges;
  std::vector<std::size_t> around;
  for (std::size_t cy = 0; cy < cells; ++cy) {
    for (std::size_t cx = 0; cx < cells; ++cx) {
      around.clear();
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          auto ny = static_cast<std::ptrdiff_t>(cy) + dy;
          auto nx = static_cast<std::ptrdiff_t>(cx) + dx;
          const auto c = static_cast<std::ptrdiff_t>(cells);
          if (torus) {
            ny = (ny + c) % c;
            nx = (nx + c) % c;
          } else if (ny < 0 || nx < 0 || ny >= c || nx >= c) {
            continue;
          }
          around.push_back(static_cast<std::size_t>(ny) * cells + static_cast<std::size_t>(nx));
        }
      }
      std::sort(around.begin(), around.end());
      around.erase(std::unique(around.begin(), around.end()), around.end());

      const std::size_t self = cy * cells + cx;
      for (std::size_t a = start[self]; a < start[self + 1]; ++a) {
        const NodeId u = members[a];
        for (std::size_t other : around) {
          for (std::size_t b = start[other]; b < start[other + 1]; ++b) {
            const NodeId v = members[b];
            if (v <= u) continue;
            if (distance(domain, ps.points[u], ps.points[v]) <= r) edges.push_back({u, v});
          }
        }
      }
    }
  }

  GeometricGraph g{std::move(ps), r, {}};
  g.topology = Graph::from_edges(n, edges);
  return g;
}

// Random simple degree-regular graph by Steger-Wormald pairing: stubs are paired
// at random, pairs forming a loop or a repeated edge are rejected, and the whole
// pairing restarts only if no admissible pair remains.
inline RegularGraph build_rrg(std::size_t n, std::size_t degree, std::uint64_t rng_seed, std::size_t max_restarts = 10000) {
  if ((n * degree) % 2 != 0) throw ParameterError("n * degree must be even");
  if (degree >= n && !(n == 0 && degree == 0)) throw ParameterError("degree must be smaller than n");
  if (n > std::numeric_limits<NodeId>::max()) throw ParameterError("too many nodes");

  Rng rng = make_rng(rng_seed);
  const auto key = [](NodeId a, NodeId b) {
    const Edge e = make_edge(a, b);
    return (static_cast<std::uint64_t>(e.u) << 32) | e.v;
  };

  std::vector<Edge> edges;
  std::unordered_set<std::uint64_t> present;
  std::vector<NodeId> stubs;
  for (std::size_t attempt = 0; attempt <= max_restarts; ++attempt) {
    edges.clear();
    edges.reserve(n * degree / 2);
    present.clear();
    present.reserve(n * degree);
    stubs.clear();
    for (std::size_t v = 0; v < n; ++v) stubs.insert(stubs.end(), degree, static_cast<NodeId>(v));

    bool stuck = false;
    std::size_t misses = 0;
    while (!stubs.empty()) {
      std::size_t i = uniform_below(rng, stubs.size());
      std::size_t j = uniform_below(rng, stubs.size());
      bool ok = i != j && stubs[i] != stubs[j] && !present.contains(key(stubs[i], stubs[j]));
      if (!ok && ++misses >= 64) {
        // Fall back to an exact draw among the admissible stub pairs.
        std::vector<std::pair<std::size_t, std::size_t>> admissible;
        for (std::size_t a = 0; a < stubs.size(); ++a)
          for (std::size_t b = a + 1; b < stubs.size(); ++b)
            if (stubs[a] != stubs[b] && !present.contains(key(stubs[a], stubs[b]))) admissible.emplace_back(a, b);
        if (admissible.empty()) {
          stuck = true;
          break;
        }
        std::tie(i, j) = admissible[uniform_below(rng, admissible.size())];
        ok = true;
      }
      if (!ok) continue;
      misses = 0;
      present.insert(key(stubs[i], stubs[j]));
      edges.push_back(make_edge(stubs[i], stubs[j]));
      if (i < j) std::swap(i, j);
      stubs[i] = stubs.back();
      stubs.pop_back();
      stubs[j] = stubs.back();
      stubs.pop_back();
    }
    if (!stuck) return RegularGraph{degree, Graph::from_edges(n, edges)};
  }
  throw ParameterError("random regular graph: restart limit exceeded");
}

// Edge list: "# n=<n> r=<r> boundary=<b>" then "u v" (u < v) per line.
inline void write_edge_list(std::ostream& os, const Graph& g, double r, std::string_view boundary) {
  const auto old_precision = os.precision();
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  os << "# n=" << g.node_count() << " r=" << r << " boundary=" << boundary << '\n';
  os.precision(old_precision);
  for (const auto& e : g.edges()) os << e.u << ' ' << e.v << '\n';
}

inline void write_edge_list(std::ostream& os, const GeometricGraph& g) {
  write_edge_list(os, g.topology, g.radius, to_string(g.points.domain.boundary()));
}

struct EdgeListFile {
  Graph graph;
  double r = 0.0;
  std::string boundary;
};

inline EdgeListFile read_edge_list(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# ", 0) != 0) throw ParameterError("edge list: missing header line");
  std::size_t n = 0;
  bool have_n = false;
  EdgeListFile out;
  std::istringstream header(line.substr(2));
  std::string field;
  while (header >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw ParameterError("edge list: malformed header field '" + field + "'");
    const std::string k = field.substr(0, eq);
    const std::string v = field.substr(eq + 1);
    try {
      if (k == "n") {
        n = std::stoull(v);
        have_n = true;
      } else if (k == "r") {
        out.r = std::stod(v);
      } else if (k == "boundary") {
        out.boundary = v;
      }
    } catch (const std::logic_error&) {
      throw ParameterError("edge list: bad value for '" + k + "'");
    }
  }
  if (!have_n) throw ParameterError("edge list: header needs n");
  std::vector<Edge> edges;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::uint64_t a = 0, b = 0;
    if (!(row >> a >> b) || a >= n || b >= n) throw ParameterError("edge list: malformed row '" + line + "'");
    edges.push_back(make_edge(static_cast<NodeId>(a), static_cast<NodeId>(b)));
  }
  out.graph = Graph::from_edges(n, edges);
  return out;
}

}  // namespace grgsimple

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "grgsimple/errors.hpp"
#include "grgsimple/geometry.hpp"
#include "grgsimple/graph.hpp"
#include "grgsimple/oracle.hpp"
#include "grgsimple/random.hpp"

namespace grgsimple {

// ---------------------------------------------------------------------------
// Seed strategies
// ---------------------------------------------------------------------------

// `count` distinct nodes drawn uniformly.
struct UniformCount {
  std::size_t count = 4;
};

// Each node kept independently with probability min(1, ln(n) * n^(epsilon - 1)).
struct UniformThinning {
  double epsilon = 0.5;
};

// Nodes nearest (toroidal distance, lowest index on ties) to the four optimal torus locations.
struct NearOptimal4 {};

struct FixedNodes {
  std::vector<NodeId> nodes;
};

struct SeedStrategy {
  std::variant<UniformCount, UniformThinning, NearOptimal4, FixedNodes> kind;
  std::uint64_t rng_seed = 0;

  static SeedStrategy count(std::size_t s, std::uint64_t seed = 0) { return {UniformCount{s}, seed}; }
  static SeedStrategy thinning(double eps, std::uint64_t seed = 0) { return {UniformThinning{eps}, seed}; }
  static SeedStrategy optimal4() { return {NearOptimal4{}, 0}; }
  static SeedStrategy fixed(std::vector<NodeId> nodes) { return {FixedNodes{std::move(nodes)}, 0}; }
};

inline std::string to_string(const SeedStrategy& s) {
  struct Visitor {
    std::string operator()(const UniformCount& c) const { return "count:" + std::to_string(c.count); }
    std::string operator()(const UniformThinning& t) const {
      std::ostringstream os;
      os << "thinning:" << std::setprecision(6) << t.epsilon;
      return os.str();
    }
    std::string operator()(const NearOptimal4&) const { return "optimal4"; }
    std::string operator()(const FixedNodes& f) const { return "fixed:" + std::to_string(f.nodes.size()); }
  };
  return std::visit(Visitor{}, s.kind);
}

// Parses "count:<s>", "thinning:<eps>" or "optimal4".
inline SeedStrategy parse_seed_strategy(std::string_view text, std::uint64_t rng_seed = 0) {
  if (text == "optimal4") return SeedStrategy::optimal4();
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw ParameterError("bad seed strategy '" + std::string(text) + "'");
  const std::string kind(text.substr(0, colon));
  const std::string value(text.substr(colon + 1));
  try {
    std::size_t used = 0;
    if (kind == "count") {
      const long long s = std::stoll(value, &used);
      if (used != value.size() || s < 1) throw ParameterError("seed count must be a positive integer");
      return SeedStrategy::count(static_cast<std::size_t>(s), rng_seed);
    }
    if (kind == "thinning") {
      const double eps = std::stod(value, &used);
      if (used != value.size() || !(eps > 0.0 && eps < 1.0)) throw ParameterError("thinning epsilon must lie in (0, 1)");
      return SeedStrategy::thinning(eps, rng_seed);
    }
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const ParameterError*>(&e)) throw;
    throw ParameterError("bad seed strategy '" + std::string(text) + "'");
  }
  throw ParameterError("bad seed strategy '" + std::string(text) + "'");
}

// |S| = max(4, round(ln(n) * n^eps)), never more than n.
inline std::size_t seed_count(std::size_t n, double epsilon) {
  if (n == 0) return 0;
  const double raw = std::log(static_cast<double>(n)) * std::pow(static_cast<double>(n), epsilon);
  const auto s = std::max<std::size_t>(4, static_cast<std::size_t>(std::llround(raw)));
  return std::min(s, n);
}

inline double thinning_probability(std::size_t n, double epsilon) {
  if (n == 0) return 0.0;
  const double nd = static_cast<double>(n);
  return std::min(1.0, std::log(nd) * std::pow(nd, epsilon - 1.0));
}

namespace detail {

inline std::vector<NodeId> select_seeds_impl(const Graph& g, const PointSet* geometry, const SeedStrategy& strategy) {
  const std::size_t n = g.node_count();
  struct Visitor {
    const Graph& g;
    const PointSet* geometry;
    std::uint64_t rng_seed;
    std::size_t n;

    std::vector<NodeId> operator()(const UniformCount& c) const {
      if (c.count < 1) throw ParameterError("seed count must be at least 1");
      if (c.count > n) throw ParameterError("seed count exceeds node count");
      Rng rng = make_rng(rng_seed);
      std::vector<NodeId> pool(n);
      std::iota(pool.begin(), pool.end(), NodeId{0});
      for (std::size_t i = 0; i < c.count; ++i) {
        const std::size_t j = i + uniform_below(rng, n - i);
        std::swap(pool[i], pool[j]);
      }
      pool.resize(c.count);
      return pool;
    }

    std::vector<NodeId> operator()(const UniformThinning& t) const {
      if (!(t.epsilon > 0.0 && t.epsilon < 1.0)) throw ParameterError("thinning epsilon must lie in (0, 1)");
      const double p = thinning_probability(n, t.epsilon);
      Rng rng = make_rng(rng_seed);
      std::vector<NodeId> out;
      for (std::size_t v = 0; v < n; ++v)
        if (uniform01(rng) < p) out.push_back(static_cast<NodeId>(v));
      return out;
    }

    std::vector<NodeId> operator()(const NearOptimal4&) const {
      if (geometry == nullptr) throw UnsupportedConfiguration("near-optimal seeds need node coordinates");
      if (geometry->domain.boundary() != Boundary::Torus)
        throw UnsupportedConfiguration("near-optimal seeds are defined on the torus only");
      if (n == 0) return {};
      std::vector<NodeId> out;
      for (const Point& target : optimal_seed_locations(geometry->domain)) {
        NodeId best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t v = 0; v < n; ++v) {
          const double d = distance(geometry->domain, geometry->points[v], target);
          if (d < best_d) {
            best_d = d;
            best = static_cast<NodeId>(v);
          }
        }
        if (std::find(out.begin(), out.end(), best) == out.end()) out.push_back(best);
      }
      return out;
    }

    std::vector<NodeId> operator()(const FixedNodes& f) const {
      for (NodeId v : f.nodes) check_node(g, v);
      return f.nodes;
    }
  };
  return std::visit(Visitor{g, geometry, strategy.rng_seed, n}, strategy.kind);
}

}  // namespace detail

inline std::vector<NodeId> select_seeds(const Graph& g, const SeedStrategy& strategy) {
  return detail::select_seeds_impl(g, nullptr, strategy);
}
inline std::vector<NodeId> select_seeds(const GeometricGraph& g, const SeedStrategy& strategy) {
  return detail::select_seeds_impl(g.topology, &g.points, strategy);
}
inline std::vector<NodeId> select_seeds(const RegularGraph& g, const SeedStrategy& strategy) {
  return detail::select_seeds_impl(g.topology, nullptr, strategy);
}

// ---------------------------------------------------------------------------
// Phase 1: seed distance table
// ---------------------------------------------------------------------------

// Hop counts from every seed to every node, stored node-major so that the
// per-pair seed comparison in candidate generation reads contiguous memory.
class SeedDistanceTable {
 public:
  SeedDistanceTable() = default;
  SeedDistanceTable(std::vector<NodeId> seeds, std::size_t node_count)
      : seeds_(std::move(seeds)), nodes_(node_count), dist_(seeds_.size() * node_count, 0) {}

  std::size_t seed_count() const noexcept { return seeds_.size(); }
  std::size_t node_count() const noexcept { return nodes_; }
  std::span<const NodeId> seeds() const noexcept { return seeds_; }

  // d_G(seeds[i], v).
  std::int32_t at(std::size_t i, NodeId v) const noexcept { return dist_[v * seeds_.size() + i]; }
  void set(std::size_t i, NodeId v, std::int32_t d) noexcept { dist_[v * seeds_.size() + i] = d; }

  // Distances from every seed to v, in seed order.
  std::span<const std::int32_t> node_row(NodeId v) const noexcept {
    return {dist_.data() + v * seeds_.size(), seeds_.size()};
  }

 private:
  std::vector<NodeId> seeds_;
  std::size_t nodes_ = 0;
  std::vector<std::int32_t> dist_;
};

// Queries every (seed, node) pair; throws ConnectivityError on a disconnected graph.
inline SeedDistanceTable phase1(DistanceOracle& oracle, std::span<const NodeId> seeds) {
  const Graph& g = oracle.graph();
  const std::size_t n = g.node_count();
  if (seeds.empty() && !is_connected(g)) throw ConnectivityError("graph is disconnected");
  SeedDistanceTable table(std::vector<NodeId>(seeds.begin(), seeds.end()), n);
  std::vector<std::int32_t> row(n);
  std::vector<NodeId> scratch;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    oracle.query_row_into(seeds[i], Phase::Phase1, row, scratch);
    if (scratch.size() != n) throw ConnectivityError("graph is disconnected");
    for (std::size_t v = 0; v < n; ++v) table.set(i, static_cast<NodeId>(v), row[v]);
  }
  return table;
}

// True if some seed s has |d(s, a) - d(s, b)| > 1.
inline bool distinguishable(const SeedDistanceTable& table, NodeId a, NodeId b) noexcept {
  const auto ra = table.node_row(a);
  const auto rb = table.node_row(b);
  for (std::size_t i = 0; i < ra.size(); ++i)
    if (static_cast<std::uint32_t>(ra[i] - rb[i] + 1) > 2u) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Candidate set
// ---------------------------------------------------------------------------

struct CandidateSet {
  std::vector<Edge> pairs;  // a < b, sorted

  std::size_t size() const noexcept { return pairs.size(); }
};

namespace detail {

// Blocked form of `distinguishable`: no early exit inside a block, so the
// inner loop vectorises.
inline bool rows_close(const std::int32_t* ra, const std::int32_t* rb, std::size_t count) noexcept {
  constexpr std::size_t kBlock = 32;
  for (std::size_t base = 0; base < count; base += kBlock) {
    const std::size_t end = std::min(count, base + kBlock);
    unsigned far = 0;
    for (std::size_t i = base; i < end; ++i) far |= static_cast<unsigned>(static_cast<std::uint32_t>(ra[i] - rb[i] + 1) > 2u);
    if (far != 0) return false;
  }
  return true;
}

}  // namespace detail

// Calls visit(a, b) for every undistinguished pair a < b, in ascending (a, b)
// order. Pairs are generated from one pivot seed's distance buckets (a pair can
// only survive if its pivot distances differ by at most one) and then checked
// against the full seed row.
template <typename Visit>
void for_each_candidate(const SeedDistanceTable& table, Visit&& visit) {
  const std::size_t n = table.node_count();
  const std::size_t s = table.seed_count();
  if (s == 0) {
    for (NodeId a = 0; a < n; ++a)
      for (NodeId b = a + 1; b < n; ++b) visit(a, b);
    return;
  }

  std::int32_t max_d = 0;
  for (std::size_t i = 0; i < s; ++i)
    for (NodeId v = 0; v < n; ++v) max_d = std::max(max_d, table.at(i, v));
  const auto buckets = static_cast<std::size_t>(max_d) + 1;

  // Pivot = seed with the fewest near-diagonal pairs.
  std::size_t pivot = 0;
  {
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> size(buckets);
    for (std::size_t i = 0; i < s; ++i) {
      std::fill(size.begin(), size.end(), 0.0);
      for (NodeId v = 0; v < n; ++v) size[static_cast<std::size_t>(table.at(i, v))] += 1.0;
      double cost = 0.0;
      for (std::size_t d = 0; d < buckets; ++d) {
        cost += size[d] * (size[d] - 1.0) / 2.0;
        if (d + 1 < buckets) cost += size[d] * size[d + 1];
      }
      if (cost < best) {
        best = cost;
        pivot = i;
      }
    }
  }

  std::vector<std::size_t> start(buckets + 1, 0);
  for (NodeId v = 0; v < n; ++v) ++start[static_cast<std::size_t>(table.at(pivot, v)) + 1];
  std::partial_sum(start.begin(), start.end(), start.begin());
  std::vector<NodeId> members(n);
  {
    std::vector<std::size_t> cursor(start.begin(), start.end() - 1);
    for (NodeId v = 0; v < n; ++v) members[cursor[static_cast<std::size_t>(table.at(pivot, v))]++] = v;
  }

  std::vector<NodeId> chunk;
  for (NodeId a = 0; a < n; ++a) {
    const auto d = static_cast<std::size_t>(table.at(pivot, a));
    const auto ra = table.node_row(a);
    chunk.clear();
    for (std::size_t bucket = d == 0 ? 0 : d - 1; bucket <= d + 1 && bucket < buckets; ++bucket) {
      const auto first = members.begin() + static_cast<std::ptrdiff_t>(start[bucket]);
      const auto last = members.begin() + static_cast<std::ptrdiff_t>(start[bucket + 1]);
      for (auto it = std::upper_bound(first, last, a); it != last; ++it) {
        if (detail::rows_close(ra.data(), table.node_row(*it).data(), s)) chunk.push_back(*it);
      }
    }
    std::sort(chunk.begin(), chunk.end());
    for (NodeId b : chunk) visit(a, b);
  }
}

inline CandidateSet candidates(const SeedDistanceTable& table) {
  CandidateSet out;
  for_each_candidate(table, [&](NodeId a, NodeId b) { out.pairs.push_back({a, b}); });
  return out;
}

// ---------------------------------------------------------------------------
// Phase 2 and the full algorithm
// ---------------------------------------------------------------------------

// Queries every candidate; returns those at distance one.
inline std::vector<Edge> phase2(DistanceOracle& oracle, const CandidateSet& cand) {
  std::vector<Edge> edges;
  for (const auto& p : cand.pairs)
    if (oracle.probe_adjacent(p.u, p.v, Phase::Phase2)) edges.push_back(p);
  return edges;
}

struct ReconstructionResult {
  std::vector<Edge> edges;  // sorted, u < v
  std::size_t seed_count = 0;
  std::uint64_t phase1_queries = 0;
  std::uint64_t phase2_queries = 0;
  std::size_t candidate_count = 0;
  double elapsed = 0.0;  // seconds

  std::uint64_t total_queries() const noexcept { return phase1_queries + phase2_queries; }
};

struct NonEdgeReport {
  std::uint64_t distinguishable_pairs = 0;  // unordered non-edge pairs
  std::uint64_t total_nonedges = 0;
  double fraction = 0.0;           // distinguishable / total non-edges (0 when there are none)
  double directed_fraction = 0.0;  // 2 * distinguishable / (n (n - 1))
  std::size_t seed_count = 0;
  std::uint64_t phase1_queries = 0;
};

namespace detail {

inline ReconstructionResult reconstruct_impl(const Graph& g, std::vector<NodeId> seeds) {
  const auto started = std::chrono::steady_clock::now();
  if (!is_connected(g)) throw ConnectivityError("graph is disconnected");
  DistanceOracle oracle(g);
  const SeedDistanceTable table = phase1(oracle, seeds);
  CandidateSet cand = candidates(table);
  ReconstructionResult result;
  result.edges = phase2(oracle, cand);
  result.seed_count = seeds.size();
  result.candidate_count = cand.size();
  result.phase1_queries = oracle.phase1_queries();
  result.phase2_queries = oracle.phase2_queries();
  result.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

inline NonEdgeReport nonedge_impl(const Graph& g, std::vector<NodeId> seeds) {
  if (!is_connected(g)) throw ConnectivityError("graph is disconnected");
  DistanceOracle oracle(g);
  const SeedDistanceTable table = phase1(oracle, seeds);
  std::uint64_t nonedge_candidates = 0;
  for_each_candidate(table, [&](NodeId a, NodeId b) { nonedge_candidates += g.has_edge(a, b) ? 0 : 1; });

  const auto n = static_cast<std::uint64_t>(g.node_count());
  const std::uint64_t all_pairs = n * (n == 0 ? 0 : n - 1) / 2;
  NonEdgeReport r;
  r.total_nonedges = all_pairs - g.edge_count();
  r.distinguishable_pairs = r.total_nonedges - nonedge_candidates;
  r.fraction = r.total_nonedges == 0 ? 0.0 : static_cast<double>(r.distinguishable_pairs) / static_cast<double>(r.total_nonedges);
  r.directed_fraction = all_pairs == 0 ? 0.0 : static_cast<double>(r.distinguishable_pairs) / static_cast<double>(all_pairs);
  r.seed_count = seeds.size();
  r.phase1_queries = oracle.phase1_queries();
  return r;
}

}  // namespace detail

// SIMPLE: seed selection, seed-row queries, candidate filtering, candidate queries.
// Exact on every connected graph; the strategy only affects the query count.
template <typename G>
ReconstructionResult reconstruct(const G& g, const SeedStrategy& strategy) {
  return detail::reconstruct_impl(topology_of(g), select_seeds(g, strategy));
}

// Phase 1 only; reports how many non-edges the seed rows already rule out.
template <typename G>
NonEdgeReport nonedge_detection(const G& g, const SeedStrategy& strategy) {
  return detail::nonedge_impl(topology_of(g), select_seeds(g, strategy));
}

}  // namespace grgsimple

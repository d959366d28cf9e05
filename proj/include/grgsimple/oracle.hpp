#pragma once

#include <atomic>
#include <cstdint>
#include <vector>

#include "grgsimple/graph.hpp"

namespace grgsimple {

enum class Phase { Phase1, Phase2 };

// Distance oracle over a fixed graph. Every invocation is charged to a phase
// counter: no caching, no deduplication, self-queries included.
class DistanceOracle {
 public:
  explicit DistanceOracle(const Graph& graph) : graph_(&graph) {}

  DistanceOracle(const DistanceOracle&) = delete;
  DistanceOracle& operator=(const DistanceOracle&) = delete;

  const Graph& graph() const noexcept { return *graph_; }
  std::size_t node_count() const noexcept { return graph_->node_count(); }

  std::uint64_t phase1_queries() const noexcept { return phase1_.load(std::memory_order_relaxed); }
  std::uint64_t phase2_queries() const noexcept { return phase2_.load(std::memory_order_relaxed); }
  std::uint64_t query_count() const noexcept { return phase1_queries() + phase2_queries(); }

  // Exact d_G(u, v) by bidirectional BFS; one query charged.
  HopCount query(NodeId u, NodeId v, Phase phase) {
    detail::check_node(*graph_, u);
    detail::check_node(*graph_, v);
    charge(phase, 1);
    return bidirectional_distance(u, v);
  }

  // Distances from s to every node (s included); n queries charged.
  DistanceVector query_row(NodeId s, Phase phase) {
    detail::check_node(*graph_, s);
    charge(phase, graph_->node_count());
    return bfs(*graph_, s);
  }

  // Same as query_row, written into a raw buffer (kNoPath for unreachable).
  void query_row_into(NodeId s, Phase phase, std::span<std::int32_t> out, std::vector<NodeId>& scratch) {
    detail::check_node(*graph_, s);
    charge(phase, graph_->node_count());
    detail::bfs_into(*graph_, s, out, scratch);
  }

  // Phase-2 probe: answers only whether d_G(u, v) == 1. Charged as one query.
  bool probe_adjacent(NodeId u, NodeId v, Phase phase = Phase::Phase2) {
    charge(phase, 1);
    return u != v && graph_->has_edge(u, v);
  }

 private:
  void charge(Phase phase, std::uint64_t count) noexcept {
    (phase == Phase::Phase1 ? phase1_ : phase2_).fetch_add(count, std::memory_order_relaxed);
  }

  HopCount bidirectional_distance(NodeId u, NodeId v) const {
    if (u == v) return HopCount(0);
    const std::size_t n = graph_->node_count();
    // side[x]: 0 unseen, 1 reached from u, 2 reached from v.
    std::vector<std::uint8_t> side(n, 0);
    std::vector<std::uint32_t> depth(n, 0);
    std::vector<NodeId> front_u{u}, front_v{v}, next;
    side[u] = 1;
    side[v] = 2;
    std::uint32_t du = 0, dv = 0;
    while (!front_u.empty() && !front_v.empty()) {
      const bool expand_u = front_u.size() <= front_v.size();
      auto& front = expand_u ? front_u : front_v;
      const std::uint8_t mine = expand_u ? 1 : 2;
      std::uint32_t& my_depth = expand_u ? du : dv;
      next.clear();
      std::uint32_t best = UINT32_MAX;
      for (NodeId x : front) {
        for (NodeId w : graph_->neighbors(x)) {
          if (side[w] == mine) continue;
          if (side[w] != 0) {
            // Met the other search: path length depth[x] + 1 + depth[w].
            best = std::min(best, depth[x] + 1 + depth[w]);
            continue;
          }
          side[w] = mine;
          depth[w] = my_depth + 1;
          next.push_back(w);
        }
      }
      if (best != UINT32_MAX) return HopCount(best);
      front.swap(next);
      ++my_depth;
    }
    return HopCount::unreachable();
  }

  const Graph* graph_;
  std::atomic<std::uint64_t> phase1_{0};
  std::atomic<std::uint64_t> phase2_{0};
};

}  // namespace grgsimple

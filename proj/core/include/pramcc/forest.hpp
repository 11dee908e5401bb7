#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "pramcc/cc.hpp"
#include "pramcc/graph.hpp"
#include "pramcc/pram.hpp"
#include "pramcc/vanilla.hpp"

namespace pramcc {

/// Per-phase state of the forest-building link step: the clean-ball radius
/// alpha, the leader distance beta (-1 while unset), and the block-indexed
/// ball tables Q. All in machine memory; exposed for invariant checks.
struct TreeLinkTrace {
  Region alpha;            // n cells
  Region beta;             // n cells, -1 = unset
  Region q_pool;           // num_blocks * table_size cells
  Region leader_neighbor;  // n cells, stamped with phase + 1

  std::int64_t alpha_of(VertexId v) const { return alpha.read(v); }
  std::int64_t beta_of(VertexId v) const { return beta.read(v); }
  std::vector<VertexId> ball_table(VertexId v, const ExpandTrace& trace) const;
};

/// Distance-layered linking: grow each non-leader's collision-free ball from
/// the retained expansion history, derive the distance to the nearest leader,
/// then hook every vertex one layer down along an input-graph arc, marking
/// that arc for the forest.
TreeLinkTrace tree_link(VanillaState& state, const ExpandTrace& trace,
                        const std::vector<VertexId>& ongoing);

/// Repeat the halving step until no parent moves; returns iterations used.
std::size_t tree_shortcut(VanillaState& state);

struct SfPhaseView {
  const VanillaState& core;
  const ExpandTrace& trace;
  const TreeLinkTrace& link;
  const std::vector<VertexId>& ongoing;
  const std::vector<std::pair<VertexId, VertexId>>& arcs_at_start;
};

struct SfObserver {
  std::function<void(const SfPhaseView&)> on_phase_end;
  std::function<void(const VanillaState&)> on_prepare_phase_end;
};

struct SfOptions {
  Profile profile = Profile::desk();
  std::optional<int> c_override;
  CoinFn prepare_coins;
  CoinFn vote_coins;
  const SfObserver* observer = nullptr;
};

struct SfResult {
  std::vector<OriginalArcRef> forest;  // marked original arcs
  std::vector<std::pair<VertexId, VertexId>> forest_edges;
  std::vector<VertexId> labels;
  std::uint64_t prepare_phases = 0;
  std::uint64_t phases = 0;
  std::uint64_t expand_rounds_total = 0;
  std::size_t tree_count = 0;
};

SfResult run_sf(const Graph& g, std::uint64_t seed, PramMachine& machine,
                const SfOptions& options = {});

/// Forest validity against the input graph: subset of input edges, acyclic,
/// and exactly (component size - 1) edges inside every oracle component.
struct ForestVerdict {
  bool subset_ok = true;
  bool acyclic_ok = true;
  bool counts_ok = true;
  std::string detail;
  bool ok() const { return subset_ok && acyclic_ok && counts_ok; }
};

ForestVerdict verify_forest(
    const Graph& g, const std::vector<std::pair<VertexId, VertexId>>& forest);

/// "u v" per marked edge plus a trailing "# trees=<k>" summary.
void write_forest(std::ostream& out,
                  const std::vector<std::pair<VertexId, VertexId>>& forest,
                  std::size_t tree_count);
std::vector<std::pair<VertexId, VertexId>> read_forest(std::istream& in);

}  // namespace pramcc

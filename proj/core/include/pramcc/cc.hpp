#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "pramcc/graph.hpp"
#include "pramcc/hashing.hpp"
#include "pramcc/pram.hpp"
#include "pramcc/profile.hpp"
#include "pramcc/vanilla.hpp"

namespace pramcc {

/// Everything one phase's expansion leaves behind. Tables live in machine
/// memory; per-round snapshots are retained (charged to the ledger) both for
/// invariant checks and because the spanning-forest linking step replays
/// them. Table cells store vertex id + 1; 0 means empty.
struct ExpandTrace {
  ExpandParams params;
  HashFn h_B;
  HashFn h_V;
  Region owner;       // n cells: block id + 1, 0 = no block
  Region dormant;     // n cells: nonzero = dormant after the expansion
  Region table_pool;  // num_blocks * table_size cells, final tables
  std::vector<Region> table_snaps;    // per round 0..rounds, pool layout
  std::vector<Region> dormant_snaps;  // per round, n cells
  std::size_t rounds = 0;             // executed merge iterations

  bool owns_block(VertexId v) const { return owner.read(v) != 0; }
  bool is_dormant(VertexId v) const { return dormant.read(v) != 0; }
  bool live_in_round(VertexId v, std::size_t j) const {
    return dormant_snaps[j].read(v) == 0;
  }
  /// Decoded table contents of H_j(v); empty when v owns no block.
  std::vector<VertexId> table_in_round(VertexId v, std::size_t j) const;
  std::vector<VertexId> final_table(VertexId v) const;
  /// First round whose table repeats the previous one (the vertex's own
  /// expansion stopped there). Defined for block owners.
  std::size_t stop_round(VertexId v) const;
};

struct CcPhaseStats {
  std::uint64_t phase = 0;
  double n_estimate = 0.0;
  double b = 2.0;
  std::size_t ongoing = 0;      // exact count at phase start
  std::size_t expand_rounds = 0;
  bool estimate_depleted = false;
};

/// Live view handed to observers after each phase; valid during the call.
struct CcPhaseView {
  const VanillaState& core;
  const ExpandTrace& trace;
  const CcPhaseStats& stats;
  /// Ongoing vertices and non-loop arcs as of the phase start (the graph the
  /// expansion ran on).
  const std::vector<VertexId>& ongoing;
  const std::vector<std::pair<VertexId, VertexId>>& arcs_at_start;
};

struct CcObserver {
  std::function<void(const CcPhaseView&)> on_phase_end;
  std::function<void(const VanillaState&)> on_prepare_phase_end;
};

struct CcOptions {
  Profile profile = Profile::desk();
  std::optional<int> c_override;
  WritePolicy policy = WritePolicy::LowestWriter;  // informational only
  CoinFn prepare_coins;  // tests: force the preprocessing votes
  CoinFn vote_coins;     // tests: force dormant-vertex leader coins
  std::optional<HashFn> forced_h_B;  // tests: pin the block hash
  std::optional<HashFn> forced_h_V;  // tests: pin the table hash
  const CcObserver* observer = nullptr;
  /// Start from an existing labeling instead of the identity (the faster
  /// algorithm hands its residual instance over this way).
  const ParentForest* initial_parents = nullptr;
  bool spanning_forest_core = false;  // lay out SF fields in the state
};

struct CcResult {
  std::vector<VertexId> labels;
  std::uint64_t prepare_phases = 0;
  std::uint64_t phases = 0;  // main-loop phases
  std::uint64_t expand_rounds_total = 0;
  std::vector<CcPhaseStats> phase_stats;
};

/// Sparse-graph preprocessing: when m/n is below the density threshold, run
/// the plain contraction for the prescribed number of phases (stopping early
/// once only loops remain, where further phases are no-ops). Returns the
/// initial vertex-count estimate per the update rule.
struct PrepareOutcome {
  std::uint64_t phases = 0;
  double n_estimate = 0.0;
  bool ran = false;
};
PrepareOutcome prepare(VanillaState& state, std::size_t m_edges, int c,
                       const CoinFn& coins,
                       const std::function<void(const VanillaState&)>&
                           on_phase_end = nullptr);

/// The hashing expansion for one phase over the given ongoing vertices.
/// Aborts if the merge loop outlives its deterministic bound.
ExpandTrace expand(VanillaState& state, const std::vector<VertexId>& ongoing,
                   const ExpandParams& params, HashFn h_B, HashFn h_V);

/// Leader selection: live vertices take the minimum id in their table;
/// dormant ones flip a b^(-2/3) coin.
void vote(VanillaState& state, const ExpandTrace& trace,
          const std::vector<VertexId>& ongoing, double leader_probability,
          const CoinFn& coins);

/// Hook every non-leader onto a leader found among its arc neighbors and
/// table entries.
void link_with_tables(VanillaState& state, const ExpandTrace& trace);

/// Full run: prepare, then {expand, vote, link, shortcut, alter} until only
/// loops remain. The graph is density-normalized internally.
CcResult run_cc(const Graph& g, std::uint64_t seed, PramMachine& machine,
                const CcOptions& options = {});

/// Exact ongoing count through the test-only combining-sum step; the oracle
/// for checking the estimate-update rule against reality.
std::size_t combining_count_ongoing(VanillaState& state);

/// Ongoing vertices (roots with a non-loop incident arc), computed through
/// the machine's stamp cells; also returns the non-loop arcs seen.
std::vector<VertexId> stamp_ongoing(VanillaState& state);

}  // namespace pramcc

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "pramcc/graph.hpp"
#include "pramcc/pram.hpp"

namespace pramcc {

/// Leader coin source, keyed per phase and vertex so phases replay exactly.
/// Tests inject fixed outcomes through this.
using CoinFn = std::function<bool(std::uint64_t phase, VertexId v)>;

CoinFn default_coins(std::uint64_t seed);

/// Shared-memory layout of a contraction run. Arcs live as (src, dst) cell
/// pairs and are rewritten in place by alter; parent and leader arrays are
/// per-vertex. The spanning-forest variant adds the per-vertex chosen arc
/// and the per-original-arc forest bit.
struct VanillaState {
  PramMachine* machine = nullptr;
  VertexId n = 0;
  std::size_t arc_count = 0;

  Region arcs;          // 2 * arc_count cells
  Region parent;        // n
  Region leader;        // n
  Region scratch;       // stamp cells: [0] non-loop witness, [1] counter
  Region vertex_stamp;  // n cells, phase-stamped by incident non-loop arcs

  bool sf = false;
  Region chosen_arc;  // n cells, arc index + 1, 0 = none
  Region forest_bit;  // arc_count cells

  std::uint64_t phase = 0;

  VertexId arc_src(std::size_t a) const {
    return static_cast<VertexId>(arcs.read(2 * a));
  }
  VertexId arc_dst(std::size_t a) const {
    return static_cast<VertexId>(arcs.read(2 * a + 1));
  }
  VertexId parent_of(VertexId v) const {
    return static_cast<VertexId>(parent.read(v));
  }

  ParentForest parents() const;
  std::vector<std::pair<VertexId, VertexId>> current_arcs() const;
  /// Original arc indices whose forest bit is set.
  std::vector<OriginalArcRef> marked_arcs() const;
  /// Roots incident with a non-loop arc (the vertices still being worked).
  std::vector<VertexId> ongoing_vertices() const;
  bool has_nonloop_arc() const;
};

/// Lay out the run state for `g` in fresh machine memory. Parents start as
/// the identity; the graph is not density-normalized here.
VanillaState init_vanilla_state(PramMachine& machine, const Graph& g,
                                bool spanning_forest);

/// One phase: random-vote, link, shortcut, alter (plus mark-edge before the
/// link in the spanning-forest variant). Assumes flat trees at entry and
/// restores them at exit.
void vanilla_phase(VanillaState& state, const CoinFn& coins);

/// The two building blocks shared by every algorithm in the repo, each a
/// single bulk step: p[v] <- p[p[v]] for all v, and arc rewriting to the
/// endpoints' parents.
void vanilla_shortcut_step(VanillaState& state);
void vanilla_alter_step(VanillaState& state);

struct VanillaObserver {
  /// Called after every phase with the live state (phase already counted).
  std::function<void(const VanillaState&)> on_phase_end;
};

struct VanillaResult {
  std::vector<VertexId> labels;  // canonical min-id per tree
  std::uint64_t phases = 0;
  std::vector<std::size_t> ongoing_after;  // ongoing count after each phase
  std::vector<OriginalArcRef> forest;      // SF variant only
};

struct VanillaOptions {
  CoinFn coins;  // default: derived from seed
  bool spanning_forest = false;
  const VanillaObserver* observer = nullptr;
};

/// Run to completion (no edge left but loops). Aborts with a diagnostic if
/// the phase count passes 64 * log2(n), which cannot happen at test sizes
/// unless something is broken.
VanillaResult run_vanilla(const Graph& g, std::uint64_t seed,
                          PramMachine& machine,
                          const VanillaOptions& options = {});

}  // namespace pramcc

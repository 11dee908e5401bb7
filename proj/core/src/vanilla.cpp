#include "pramcc/vanilla.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pramcc/rng.hpp"

namespace pramcc {

namespace {

constexpr std::size_t kNonLoopStamp = 0;

}  // namespace

CoinFn default_coins(std::uint64_t seed) {
  return [seed](std::uint64_t phase, VertexId v) {
    return (mix_key(seed, 0x766f7465ULL, phase, v) & 1ULL) != 0;
  };
}

ParentForest VanillaState::parents() const {
  ParentForest d;
  d.parent.resize(n);
  for (VertexId v = 0; v < n; ++v) d.parent[v] = parent_of(v);
  return d;
}

std::vector<std::pair<VertexId, VertexId>> VanillaState::current_arcs() const {
  std::vector<std::pair<VertexId, VertexId>> out(arc_count);
  for (std::size_t a = 0; a < arc_count; ++a) {
    out[a] = {arc_src(a), arc_dst(a)};
  }
  return out;
}

std::vector<OriginalArcRef> VanillaState::marked_arcs() const {
  std::vector<OriginalArcRef> out;
  for (std::size_t a = 0; a < arc_count; ++a) {
    if (forest_bit.read(a) != 0) out.push_back(static_cast<OriginalArcRef>(a));
  }
  return out;
}

std::vector<VertexId> VanillaState::ongoing_vertices() const {
  std::vector<std::uint8_t> touched(n, 0);
  for (std::size_t a = 0; a < arc_count; ++a) {
    VertexId v = arc_src(a);
    VertexId w = arc_dst(a);
    if (v != w) {
      touched[v] = 1;
      touched[w] = 1;
    }
  }
  std::vector<VertexId> out;
  for (VertexId v = 0; v < n; ++v) {
    if (touched[v] && parent_of(v) == v) out.push_back(v);
  }
  return out;
}

bool VanillaState::has_nonloop_arc() const {
  // One step: every non-loop arc stamps a shared witness cell with the
  // current phase; concurrent equal-value writes are conflict-free in effect.
  Word stamp = static_cast<Word>(phase + 1);
  for (std::size_t a = 0; a < arc_count; ++a) {
    if (arc_src(a) != arc_dst(a)) {
      scratch.write(kNonLoopStamp, stamp, a);
    }
  }
  machine->end_step(arc_count);
  return scratch.read(kNonLoopStamp) == stamp;
}

VanillaState init_vanilla_state(PramMachine& machine, const Graph& g,
                                bool spanning_forest) {
  if (g.n == 0) throw std::invalid_argument("empty graph");
  VanillaState s;
  s.machine = &machine;
  s.n = g.n;
  s.arc_count = g.arc_count();
  s.sf = spanning_forest;

  Zone base{0, 0};
  s.arcs = Region(&machine,
                  machine.allocate_block(
                      std::max<std::size_t>(1, 2 * g.arc_count()), base),
                  2 * g.arc_count());
  s.parent = Region(&machine, machine.allocate_block(g.n, base), g.n);
  s.leader = Region(&machine, machine.allocate_block(g.n, base), g.n);
  s.scratch = Region(&machine, machine.allocate_block(4, base), 4);
  s.vertex_stamp = Region(&machine, machine.allocate_block(g.n, base), g.n);
  if (spanning_forest) {
    s.chosen_arc =
        Region(&machine, machine.allocate_block(g.n, base), g.n);
    s.forest_bit =
        Region(&machine,
               machine.allocate_block(
                   std::max<std::size_t>(1, g.arc_count()), base),
               g.arc_count());
  }

  for (std::size_t a = 0; a < g.arc_count(); ++a) {
    s.arcs.write(2 * a, g.arcs[a].first, a);
    s.arcs.write(2 * a + 1, g.arcs[a].second, a);
  }
  for (VertexId v = 0; v < g.n; ++v) {
    s.parent.write(v, v, v);
  }
  machine.end_step(2 * g.arc_count() + g.n);
  return s;
}

namespace {

void step_random_vote(VanillaState& s, const CoinFn& coins) {
  for (VertexId v = 0; v < s.n; ++v) {
    s.leader.write(v, coins(s.phase, v) ? 1 : 0, v);
  }
  s.machine->end_step(s.n);
}

void step_link_direct(VanillaState& s) {
  // Direct link: arc (v, w) hooks non-leader v onto leader w. All arc
  // endpoints are roots here (flat trees, edges altered to roots), and
  // several arcs may race for v's parent cell.
  for (std::size_t a = 0; a < s.arc_count; ++a) {
    VertexId v = s.arc_src(a);
    VertexId w = s.arc_dst(a);
    if (v == w) continue;
    if (s.leader.read(v) == 0 && s.leader.read(w) == 1) {
      s.parent.write(v, w, a);
    }
  }
  s.machine->end_step(s.arc_count);
}

void step_mark_edge(VanillaState& s) {
  for (std::size_t a = 0; a < s.arc_count; ++a) {
    VertexId v = s.arc_src(a);
    VertexId w = s.arc_dst(a);
    if (v == w) continue;
    if (s.leader.read(v) == 0 && s.leader.read(w) == 1) {
      s.chosen_arc.write(v, static_cast<Word>(a) + 1, a);
    }
  }
  s.machine->end_step(s.arc_count);
}

void step_link_via_chosen_arc(VanillaState& s) {
  for (VertexId v = 0; v < s.n; ++v) {
    Word stored = s.chosen_arc.read(v);
    if (stored == 0) continue;
    std::size_t a = static_cast<std::size_t>(stored - 1);
    s.parent.write(v, s.arc_dst(a), v);
    s.forest_bit.write(a, 1, v);
  }
  s.machine->end_step(s.n);
}

void step_clear_chosen_arcs(VanillaState& s) {
  for (VertexId v = 0; v < s.n; ++v) {
    if (s.chosen_arc.read(v) != 0) s.chosen_arc.write(v, 0, v);
  }
  s.machine->end_step(s.n);
}

}  // namespace

void vanilla_phase(VanillaState& state, const CoinFn& coins) {
  state.machine->begin_round();
  step_random_vote(state, coins);
  if (state.sf) {
    step_clear_chosen_arcs(state);
    step_mark_edge(state);
    step_link_via_chosen_arc(state);
  } else {
    step_link_direct(state);
  }
  vanilla_shortcut_step(state);
  vanilla_alter_step(state);
  ++state.phase;
}

void vanilla_shortcut_step(VanillaState& s) {
  for (VertexId v = 0; v < s.n; ++v) {
    VertexId p = s.parent_of(v);
    VertexId pp = s.parent_of(p);
    if (p != pp) s.parent.write(v, pp, v);
  }
  s.machine->end_step(s.n);
}

void vanilla_alter_step(VanillaState& s) {
  for (std::size_t a = 0; a < s.arc_count; ++a) {
    VertexId v = s.arc_src(a);
    VertexId w = s.arc_dst(a);
    VertexId pv = s.parent_of(v);
    VertexId pw = s.parent_of(w);
    if (pv != v) s.arcs.write(2 * a, pv, a);
    if (pw != w) s.arcs.write(2 * a + 1, pw, a);
  }
  s.machine->end_step(s.arc_count);
}

VanillaResult run_vanilla(const Graph& g, std::uint64_t seed,
                          PramMachine& machine,
                          const VanillaOptions& options) {
  VanillaState state = init_vanilla_state(machine, g, options.spanning_forest);
  CoinFn coins = options.coins ? options.coins : default_coins(seed);

  std::uint64_t cap =
      64 * std::max<std::uint64_t>(
               1, static_cast<std::uint64_t>(
                      std::ceil(std::log2(std::max<double>(g.n, 2)))));
  VanillaResult result;
  while (state.has_nonloop_arc()) {
    if (result.phases >= cap) {
      throw AbortDiagnostic("vanilla: phase cap " + std::to_string(cap) +
                            " exceeded at n=" + std::to_string(g.n));
    }
    vanilla_phase(state, coins);
    ++result.phases;
    result.ongoing_after.push_back(state.ongoing_vertices().size());
    if (options.observer && options.observer->on_phase_end) {
      options.observer->on_phase_end(state);
    }
  }
  result.labels = canonical_labels(state.parents());
  if (options.spanning_forest) result.forest = state.marked_arcs();
  return result;
}

}  // namespace pramcc

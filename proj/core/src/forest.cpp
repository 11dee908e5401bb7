#include "pramcc/forest.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "pramcc/rng.hpp"

namespace pramcc {

std::vector<VertexId> TreeLinkTrace::ball_table(
    VertexId v, const ExpandTrace& trace) const {
  Word o = trace.owner.read(v);
  if (o == 0) return {};
  std::uint64_t block = static_cast<std::uint64_t>(o - 1);
  std::uint64_t ts = trace.params.table_size;
  std::vector<VertexId> out;
  for (std::uint64_t s = 0; s < ts; ++s) {
    Word cell = q_pool.read(block * ts + s);
    if (cell != 0) out.push_back(static_cast<VertexId>(cell - 1));
  }
  std::sort(out.begin(), out.end());
  return out;
}

TreeLinkTrace tree_link(VanillaState& state, const ExpandTrace& trace,
                        const std::vector<VertexId>& ongoing) {
  PramMachine& m = *state.machine;
  const std::uint64_t nb = trace.params.num_blocks;
  const std::uint64_t ts = trace.params.table_size;
  const HashFn& h_V = trace.h_V;
  Zone zone{static_cast<int>(state.phase) + 1, 0};
  Word stamp = static_cast<Word>(state.phase) + 1;

  TreeLinkTrace link;
  link.alpha = Region(&m, m.allocate_block(state.n, zone), state.n);
  link.beta = Region(&m, m.allocate_block(state.n, zone), state.n);
  link.q_pool = Region(&m, m.allocate_block(nb * ts, zone), nb * ts);
  link.leader_neighbor = Region(&m, m.allocate_block(state.n, zone), state.n);
  // Collision / leader-present stamps for the candidate table of each round.
  Region q_collision(&m, m.allocate_block(state.n, zone), state.n);
  Region q_leader(&m, m.allocate_block(state.n, zone), state.n);

  auto owner_block = [&](VertexId v) -> std::int64_t {
    Word o = trace.owner.read(v);
    return o == 0 ? -1 : static_cast<std::int64_t>(o - 1);
  };

  // Start every vertex from radius -1 (nothing known) except non-leader
  // block owners, whose ball of radius 0 is themselves. Old chosen arcs are
  // stale by now, clear them alongside.
  for (VertexId u = 0; u < state.n; ++u) {
    link.beta.write(u, -1, u);
    if (state.chosen_arc.read(u) != 0) state.chosen_arc.write(u, 0, u);
  }
  for (VertexId u : ongoing) {
    bool is_leader = state.leader.read(u) == 1;
    std::int64_t block = owner_block(u);
    if (is_leader || block < 0) {
      link.alpha.write(u, -1, u);
    } else {
      link.alpha.write(u, 0, u);
      link.q_pool.write(static_cast<std::uint64_t>(block) * ts + h_V.eval(u),
                        static_cast<Word>(u) + 1, u);
    }
  }
  m.end_step(2 * state.n);

  // Grow the balls by descending powers of two. A round may double the
  // radius only if every current member was still live then and the grown
  // candidate table comes out collision-free and leader-free.
  for (std::size_t jj = trace.rounds + 1; jj-- > 0;) {
    std::size_t j = jj;
    Zone round_zone{static_cast<int>(state.phase) + 1,
                    static_cast<int>(j) + 1};
    Region q_next(&m, m.allocate_block(nb * ts, round_zone), nb * ts);
    Word round_stamp = stamp * 64 + static_cast<Word>(j) + 1;

    auto eligible = [&](VertexId u) -> bool {
      if (link.alpha.read(u) < 0) return false;
      std::int64_t block = owner_block(u);
      for (std::uint64_t s = 0; s < ts; ++s) {
        Word cell =
            link.q_pool.read(static_cast<std::uint64_t>(block) * ts + s);
        if (cell != 0 &&
            !trace.live_in_round(static_cast<VertexId>(cell - 1), j)) {
          return false;
        }
      }
      return true;
    };

    // Candidate tables: members' round-j tables hashed together.
    for (VertexId u : ongoing) {
      if (!eligible(u)) continue;
      std::uint64_t ublock = static_cast<std::uint64_t>(owner_block(u));
      for (std::uint64_t s = 0; s < ts; ++s) {
        Word vcell = link.q_pool.read(ublock * ts + s);
        if (vcell == 0) continue;
        std::int64_t vblock = owner_block(static_cast<VertexId>(vcell - 1));
        if (vblock < 0) continue;
        for (std::uint64_t t = 0; t < ts; ++t) {
          Word wcell = trace.table_snaps[j].read(
              static_cast<std::uint64_t>(vblock) * ts + t);
          if (wcell == 0) continue;
          std::uint64_t dest =
              ublock * ts + h_V.eval(static_cast<std::uint64_t>(wcell - 1));
          q_next.write(dest, wcell, ublock * ts * ts + s * ts + t);
        }
      }
    }
    m.end_step(nb * ts * ts);

    // Inspect the candidates: a lost write is a collision, any leader entry
    // blocks the growth as well.
    for (VertexId u : ongoing) {
      if (!eligible(u)) continue;
      std::uint64_t ublock = static_cast<std::uint64_t>(owner_block(u));
      for (std::uint64_t s = 0; s < ts; ++s) {
        Word vcell = link.q_pool.read(ublock * ts + s);
        if (vcell == 0) continue;
        std::int64_t vblock = owner_block(static_cast<VertexId>(vcell - 1));
        if (vblock < 0) continue;
        for (std::uint64_t t = 0; t < ts; ++t) {
          Word wcell = trace.table_snaps[j].read(
              static_cast<std::uint64_t>(vblock) * ts + t);
          if (wcell == 0) continue;
          std::uint64_t dest =
              ublock * ts + h_V.eval(static_cast<std::uint64_t>(wcell - 1));
          if (q_next.read(dest) != wcell) {
            q_collision.write(u, round_stamp, ublock * ts * ts + s * ts + t);
          }
        }
      }
      for (std::uint64_t s = 0; s < ts; ++s) {
        Word cell = q_next.read(ublock * ts + s);
        if (cell != 0 &&
            state.leader.read(static_cast<VertexId>(cell - 1)) == 1) {
          q_leader.write(u, round_stamp, ublock * ts + s);
        }
      }
    }
    m.end_step(nb * ts * ts + nb * ts);

    // Commit the growth where the candidate table came out clean.
    for (VertexId u : ongoing) {
      if (!eligible(u)) continue;
      if (q_collision.read(u) == round_stamp) continue;
      if (q_leader.read(u) == round_stamp) continue;
      std::uint64_t ublock = static_cast<std::uint64_t>(owner_block(u));
      for (std::uint64_t s = 0; s < ts; ++s) {
        link.q_pool.write(ublock * ts + s, q_next.read(ublock * ts + s),
                          ublock * ts + s);
      }
      link.alpha.write(u, link.alpha.read(u) + (Word{1} << j), u);
    }
    m.end_step(nb * ts + state.n);
  }

  // Leader adjacency: every arc out of a leader marks its head, then each
  // non-leader whose ball touches a marked vertex knows its leader distance.
  for (std::size_t a = 0; a < state.arc_count; ++a) {
    VertexId v = state.arc_src(a);
    VertexId w = state.arc_dst(a);
    if (v == w) continue;
    if (state.leader.read(v) == 1) link.leader_neighbor.write(w, stamp, a);
  }
  m.end_step(state.arc_count);

  for (VertexId u : ongoing) {
    if (state.leader.read(u) == 1) {
      link.beta.write(u, 0, u);
      continue;
    }
    std::int64_t block = owner_block(u);
    if (block < 0) continue;
    bool touches_leader = false;
    for (std::uint64_t s = 0; s < ts; ++s) {
      Word cell = link.q_pool.read(static_cast<std::uint64_t>(block) * ts + s);
      if (cell != 0 &&
          link.leader_neighbor.read(static_cast<VertexId>(cell - 1)) ==
              stamp) {
        touches_leader = true;
      }
    }
    if (touches_leader) {
      link.beta.write(u, link.alpha.read(u) + 1, u);
    }
  }
  m.end_step(state.n + nb * ts);

  // Arc selection one layer down; races decided by the machine policy.
  for (std::size_t a = 0; a < state.arc_count; ++a) {
    VertexId v = state.arc_src(a);
    VertexId w = state.arc_dst(a);
    if (v == w) continue;
    Word bv = link.beta.read(v);
    Word bw = link.beta.read(w);
    if (bw >= 0 && bv == bw + 1) {
      state.chosen_arc.write(v, static_cast<Word>(a) + 1, a);
    }
  }
  m.end_step(state.arc_count);

  for (VertexId u = 0; u < state.n; ++u) {
    Word stored = state.chosen_arc.read(u);
    if (stored == 0) continue;
    std::size_t a = static_cast<std::size_t>(stored - 1);
    state.parent.write(u, state.arc_dst(a), u);
    state.forest_bit.write(a, 1, u);
  }
  m.end_step(state.n);

  return link;
}

std::size_t tree_shortcut(VanillaState& state) {
  PramMachine& m = *state.machine;
  std::size_t iterations = 0;
  std::size_t cap =
      2 * static_cast<std::size_t>(
              std::ceil(std::log2(std::max<double>(state.n, 2)))) + 4;
  for (;;) {
    ++iterations;
    if (iterations > cap) {
      throw AbortDiagnostic("tree-shortcut: no fixpoint after " +
                            std::to_string(cap) + " halvings");
    }
    Word stamp = static_cast<Word>(state.phase * 1000 + iterations);
    for (VertexId v = 0; v < state.n; ++v) {
      VertexId p = state.parent_of(v);
      VertexId pp = state.parent_of(p);
      if (p != pp) {
        state.parent.write(v, pp, v);
        state.scratch.write(3, stamp, v);
      }
    }
    m.end_step(state.n);
    if (state.scratch.read(3) != stamp) break;  // nothing moved
  }
  return iterations;
}

SfResult run_sf(const Graph& g, std::uint64_t seed, PramMachine& machine,
                const SfOptions& options) {
  Graph work = normalize_density(g);
  VanillaState state = init_vanilla_state(machine, work, /*spanning=*/true);

  const Profile& profile = options.profile;
  int c = options.c_override.value_or(profile.c);
  CoinFn prep_coins =
      options.prepare_coins ? options.prepare_coins : default_coins(seed);

  SfResult result;
  PrepareOutcome prep = prepare(
      state, work.edge_count(), c, prep_coins,
      options.observer ? options.observer->on_prepare_phase_end : nullptr);
  result.prepare_phases = prep.phases;
  double n_estimate = prep.n_estimate;

  std::uint64_t cap =
      64 * std::max<std::uint64_t>(
               1, static_cast<std::uint64_t>(
                      std::ceil(std::log2(std::max<double>(state.n, 2)))));

  while (state.has_nonloop_arc()) {
    if (result.phases >= cap) {
      throw AbortDiagnostic("sf: phase cap " + std::to_string(cap) +
                            " exceeded at n=" + std::to_string(state.n));
    }
    machine.begin_round();
    std::vector<VertexId> ongoing = stamp_ongoing(state);
    std::vector<std::pair<VertexId, VertexId>> arcs_at_start =
        state.current_arcs();

    ExpandParams params =
        ExpandParams::derive(work.edge_count(), n_estimate, profile);
    SeedStream hash_rng(mix_key(seed, 0x68617368ULL, state.phase));
    HashFn h_B = sample_hash(state.n, params.num_blocks, hash_rng);
    HashFn h_V = sample_hash(state.n, params.table_size, hash_rng);

    ExpandTrace trace = expand(state, ongoing, params, h_B, h_V);

    double leader_probability = std::pow(params.b, -profile.vote_exp);
    CoinFn vote_coins =
        options.vote_coins
            ? options.vote_coins
            : CoinFn([seed, leader_probability](std::uint64_t phase,
                                                 VertexId v) {
                double u = static_cast<double>(
                               mix_key(seed, 0x636f696eULL, phase, v) >> 11) *
                           0x1.0p-53;
                return u < leader_probability;
              });
    vote(state, trace, ongoing, leader_probability, vote_coins);

    TreeLinkTrace link = tree_link(state, trace, ongoing);
    tree_shortcut(state);
    vanilla_alter_step(state);

    result.expand_rounds_total += trace.rounds;
    ++result.phases;
    if (options.observer && options.observer->on_phase_end) {
      SfPhaseView view{state, trace, link, ongoing, arcs_at_start};
      options.observer->on_phase_end(view);
    }

    BudgetUpdate upd = update_budget(n_estimate, work.edge_count(), profile);
    n_estimate = upd.n_next;
    ++state.phase;
  }

  result.forest = state.marked_arcs();
  for (OriginalArcRef a : result.forest) {
    result.forest_edges.push_back(work.arcs[a]);
  }
  result.labels = canonical_labels(state.parents());
  result.tree_count = state.parents().root_count();
  return result;
}

ForestVerdict verify_forest(
    const Graph& g, const std::vector<std::pair<VertexId, VertexId>>& forest) {
  ForestVerdict verdict;
  std::ostringstream detail;

  // Multiset containment in the input's undirected edges.
  std::map<std::pair<VertexId, VertexId>, std::int64_t> available;
  for (std::size_t i = 0; i < g.arcs.size(); i += 2) {
    auto [u, v] = g.arcs[i];
    if (u > v) std::swap(u, v);
    ++available[{u, v}];
  }
  for (auto [u, v] : forest) {
    if (u >= g.n || v >= g.n) {
      verdict.subset_ok = false;
      detail << "edge (" << u << "," << v << ") outside vertex range; ";
      continue;
    }
    if (u > v) std::swap(u, v);
    if (--available[{u, v}] < 0) {
      verdict.subset_ok = false;
      detail << "edge (" << u << "," << v << ") not in input; ";
    }
  }

  // Cycle check.
  std::vector<VertexId> uf(g.n);
  std::iota(uf.begin(), uf.end(), 0);
  auto find = [&](VertexId v) {
    while (uf[v] != v) {
      uf[v] = uf[uf[v]];
      v = uf[v];
    }
    return v;
  };
  for (auto [u, v] : forest) {
    if (u >= g.n || v >= g.n) continue;
    VertexId ru = find(u);
    VertexId rv = find(v);
    if (ru == rv) {
      verdict.acyclic_ok = false;
      detail << "edge (" << u << "," << v << ") closes a cycle; ";
    } else {
      uf[ru] = rv;
    }
  }

  // Per-component spanning count.
  std::vector<VertexId> labels = oracle_components(g);
  std::map<VertexId, std::size_t> comp_size;
  for (VertexId v = 0; v < g.n; ++v) ++comp_size[labels[v]];
  std::map<VertexId, std::size_t> comp_edges;
  for (auto [u, v] : forest) {
    if (u < g.n) ++comp_edges[labels[u]];
  }
  for (const auto& [comp, size] : comp_size) {
    std::size_t have = comp_edges.count(comp) ? comp_edges[comp] : 0;
    if (have != size - 1) {
      verdict.counts_ok = false;
      detail << "component " << comp << " has " << have << " edges, needs "
             << (size - 1) << "; ";
    }
  }
  verdict.detail = detail.str();
  return verdict;
}

void write_forest(std::ostream& out,
                  const std::vector<std::pair<VertexId, VertexId>>& forest,
                  std::size_t tree_count) {
  for (auto [u, v] : forest) out << u << ' ' << v << '\n';
  out << "# trees=" << tree_count << '\n';
}

std::vector<std::pair<VertexId, VertexId>> read_forest(std::istream& in) {
  std::vector<std::pair<VertexId, VertexId>> forest;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    VertexId u = 0;
    VertexId v = 0;
    if (!(ls >> u >> v)) {
      throw std::runtime_error("forest parse error at line " +
                               std::to_string(lineno));
    }
    forest.emplace_back(u, v);
  }
  return forest;
}

}  // namespace pramcc

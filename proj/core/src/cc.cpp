#include "pramcc/cc.hpp"

#include <algorithm>
#include <cmath>

#include "pramcc/rng.hpp"

namespace pramcc {

namespace {

constexpr std::size_t kNonLoopStamp = 0;
constexpr std::size_t kCounterCell = 1;
constexpr std::size_t kNewEntryCell = 2;

std::vector<VertexId> decode_table(const Region& pool, std::size_t block,
                                   std::uint64_t table_size) {
  std::vector<VertexId> out;
  for (std::uint64_t s = 0; s < table_size; ++s) {
    Word cell = pool.read(block * table_size + s);
    if (cell != 0) out.push_back(static_cast<VertexId>(cell - 1));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<VertexId> ExpandTrace::table_in_round(VertexId v,
                                                  std::size_t j) const {
  Word o = owner.read(v);
  if (o == 0) return {};
  return decode_table(table_snaps[j], static_cast<std::size_t>(o - 1),
                      params.table_size);
}

std::vector<VertexId> ExpandTrace::final_table(VertexId v) const {
  Word o = owner.read(v);
  if (o == 0) return {};
  return decode_table(table_pool, static_cast<std::size_t>(o - 1),
                      params.table_size);
}

std::size_t ExpandTrace::stop_round(VertexId v) const {
  std::vector<VertexId> prev;  // table before round 0 is empty
  for (std::size_t j = 0; j <= rounds; ++j) {
    std::vector<VertexId> cur = table_in_round(v, j);
    if (cur == prev) return j;
    prev = std::move(cur);
  }
  return rounds;
}

std::vector<VertexId> stamp_ongoing(VanillaState& state) {
  Word stamp = static_cast<Word>(state.phase + 1);
  for (std::size_t a = 0; a < state.arc_count; ++a) {
    VertexId v = state.arc_src(a);
    VertexId w = state.arc_dst(a);
    if (v != w) {
      state.vertex_stamp.write(v, stamp, a);
      state.vertex_stamp.write(w, stamp, a);
    }
  }
  state.machine->end_step(state.arc_count);
  std::vector<VertexId> ongoing;
  for (VertexId v = 0; v < state.n; ++v) {
    if (state.vertex_stamp.read(v) == stamp && state.parent_of(v) == v) {
      ongoing.push_back(v);
    }
  }
  return ongoing;
}

std::size_t combining_count_ongoing(VanillaState& state) {
  std::vector<VertexId> ongoing = stamp_ongoing(state);
  Word stamp = static_cast<Word>(state.phase + 1);
  for (VertexId v = 0; v < state.n; ++v) {
    if (state.vertex_stamp.read(v) == stamp && state.parent_of(v) == v) {
      state.scratch.write(kCounterCell, 1, v);
    }
  }
  state.machine->end_step_combining_sum(state.n);
  auto total = static_cast<std::size_t>(state.scratch.read(kCounterCell));
  (void)ongoing;
  return total;
}

PrepareOutcome prepare(VanillaState& state, std::size_t m_edges, int c,
                       const CoinFn& coins,
                       const std::function<void(const VanillaState&)>&
                           on_phase_end) {
  PrepareOutcome out;
  if (prepare_is_sparse(m_edges, state.n, c)) {
    out.ran = true;
    std::uint64_t budgeted = prepare_phase_count(state.n, c);
    for (std::uint64_t i = 0; i < budgeted; ++i) {
      // Remaining phases are no-ops once only loops remain.
      if (!state.has_nonloop_arc()) break;
      vanilla_phase(state, coins);
      ++out.phases;
      if (on_phase_end) on_phase_end(state);
    }
    double logc = std::pow(std::log2(std::max<double>(state.n, 2.0)),
                           static_cast<double>(c));
    out.n_estimate = std::max(1.0, static_cast<double>(state.n) / logc);
  } else {
    out.n_estimate = static_cast<double>(state.n);
  }
  return out;
}

ExpandTrace expand(VanillaState& state, const std::vector<VertexId>& ongoing,
                   const ExpandParams& params, HashFn h_B, HashFn h_V) {
  PramMachine& m = *state.machine;
  ExpandTrace trace;
  trace.params = params;
  trace.h_B = h_B;
  trace.h_V = h_V;

  const std::uint64_t nb = params.num_blocks;
  const std::uint64_t ts = params.table_size;
  const std::uint64_t bs = params.block_size;
  Zone zone{static_cast<int>(state.phase) + 1, 0};

  Region claim(&m, m.allocate_block(nb, zone), nb);
  Region contested(&m, m.allocate_block(nb, zone), nb);
  trace.owner = Region(&m, m.allocate_block(state.n, zone), state.n);
  trace.dormant = Region(&m, m.allocate_block(state.n, zone), state.n);
  // The processor pool: one block of block_size processors per table; the
  // table occupies the leading table_size cells of its block.
  Region pool(&m, m.allocate_block(nb * bs, zone), nb * bs);
  trace.table_pool = Region(&m, pool.base(), nb * ts);  // accessor view

  auto table_cell = [&](std::uint64_t block, std::uint64_t slot) {
    return block * bs + slot;
  };

  // Block assignment: every ongoing vertex claims its hashed block; a block
  // with one claimant makes that vertex the owner, everyone else is dormant.
  state.scratch.write(kNewEntryCell, 0, 0);  // reset the merge-loop witness
  for (VertexId v : ongoing) {
    claim.write(h_B.eval(v), static_cast<Word>(v) + 1, v);
  }
  m.end_step(state.n);
  for (VertexId v : ongoing) {
    if (claim.read(h_B.eval(v)) != static_cast<Word>(v) + 1) {
      contested.write(h_B.eval(v), 1, v);
      trace.dormant.write(v, 1, v);
    }
  }
  m.end_step(state.n);
  for (VertexId v : ongoing) {
    std::uint64_t block = h_B.eval(v);
    if (claim.read(block) == static_cast<Word>(v) + 1) {
      if (contested.read(block) != 0) {
        trace.dormant.write(v, 1, v);
      } else {
        trace.owner.write(v, static_cast<Word>(block) + 1, v);
      }
    }
  }
  m.end_step(state.n);

  // Initial hashing: arc (v, w) writes both endpoints into v's table when v
  // owns a block; otherwise w inherits dormancy from its blockless neighbor.
  for (std::size_t a = 0; a < state.arc_count; ++a) {
    VertexId v = state.arc_src(a);
    VertexId w = state.arc_dst(a);
    if (v == w) continue;
    Word o = trace.owner.read(v);
    if (o != 0) {
      std::uint64_t block = static_cast<std::uint64_t>(o - 1);
      pool.write(table_cell(block, h_V.eval(v)), static_cast<Word>(v) + 1, a);
      pool.write(table_cell(block, h_V.eval(w)), static_cast<Word>(w) + 1, a);
    } else {
      trace.dormant.write(w, 1, a);
    }
  }
  m.end_step(state.arc_count);
  // Collision detection: a hashing that did not survive in its cell means
  // two different values met there; the table's owner goes dormant.
  for (std::size_t a = 0; a < state.arc_count; ++a) {
    VertexId v = state.arc_src(a);
    VertexId w = state.arc_dst(a);
    if (v == w) continue;
    Word o = trace.owner.read(v);
    if (o == 0) continue;
    std::uint64_t block = static_cast<std::uint64_t>(o - 1);
    if (pool.read(table_cell(block, h_V.eval(v))) != static_cast<Word>(v) + 1 ||
        pool.read(table_cell(block, h_V.eval(w))) != static_cast<Word>(w) + 1) {
      trace.dormant.write(v, 1, a);
    }
  }
  m.end_step(state.arc_count);

  auto snapshot = [&](std::size_t round) {
    Zone snap_zone{static_cast<int>(state.phase) + 1,
                   static_cast<int>(round) + 1};
    Region tsnap(&m, m.allocate_block(nb * ts, snap_zone), nb * ts);
    Region dsnap(&m, m.allocate_block(state.n, snap_zone), state.n);
    for (std::uint64_t b = 0; b < nb; ++b) {
      for (std::uint64_t s = 0; s < ts; ++s) {
        Word val = pool.read(table_cell(b, s));
        if (val != 0) tsnap.write(b * ts + s, val, b * ts + s);
      }
    }
    for (VertexId v = 0; v < state.n; ++v) {
      Word d = trace.dormant.read(v);
      if (d != 0) dsnap.write(v, d, v);
    }
    m.end_step(nb * ts + state.n);
    trace.table_snaps.push_back(tsnap);
    trace.dormant_snaps.push_back(dsnap);
  };
  snapshot(0);

  const std::size_t round_cap =
      static_cast<std::size_t>(
          std::ceil(std::log2(std::max<double>(state.n, 2.0)))) + 2;

  // Two-hop merge rounds: every table pulls its members' members, doubling
  // its radius, until no table gains a cell.
  std::vector<VertexId> owners;
  for (VertexId v : ongoing) {
    if (trace.owner.read(v) != 0) owners.push_back(v);
  }
  for (std::size_t round = 1;; ++round) {
    if (round > round_cap) {
      throw AbortDiagnostic(
          "expand: merge loop exceeded " + std::to_string(round_cap) +
          " rounds (n=" + std::to_string(state.n) + ")");
    }
    m.begin_round();

    // Dormancy travels through table membership, one hop per round.
    for (VertexId u : owners) {
      std::uint64_t block = static_cast<std::uint64_t>(trace.owner.read(u)) - 1;
      for (std::uint64_t s = 0; s < ts; ++s) {
        Word val = pool.read(table_cell(block, s));
        if (val != 0 && trace.dormant.read(static_cast<VertexId>(val - 1))) {
          trace.dormant.write(u, 1, u);
        }
      }
    }
    m.end_step(owners.size() * ts);

    // Merge: cell pair (s, t) of u's block reads v from slot s, w from slot
    // t of v's table, and offers w to u's table. A writer seeing a foreign
    // occupant reports the collision immediately; losers against concurrent
    // different values are caught by the re-read below.
    for (VertexId u : owners) {
      std::uint64_t ublock =
          static_cast<std::uint64_t>(trace.owner.read(u)) - 1;
      for (std::uint64_t s = 0; s < ts; ++s) {
        Word vcell = pool.read(table_cell(ublock, s));
        if (vcell == 0) continue;
        VertexId v = static_cast<VertexId>(vcell - 1);
        Word vo = trace.owner.read(v);
        if (vo == 0) continue;  // blockless members contribute nothing
        std::uint64_t vblock = static_cast<std::uint64_t>(vo - 1);
        for (std::uint64_t t = 0; t < ts; ++t) {
          Word wcell = pool.read(table_cell(vblock, t));
          if (wcell == 0) continue;
          std::uint64_t writer = table_cell(ublock, s) * ts + t;
          std::uint64_t dest = table_cell(ublock, h_V.eval(
              static_cast<std::uint64_t>(wcell - 1)));
          Word pre = pool.read(dest);
          pool.write(dest, wcell, writer);
          if (pre == 0) {
            state.scratch.write(kNewEntryCell, static_cast<Word>(round),
                                writer);
          } else if (pre != wcell) {
            trace.dormant.write(u, 1, writer);
          }
        }
      }
    }
    m.end_step(owners.size() * bs);

    // Re-read pass from the pre-merge snapshot: any offer that lost to a
    // different value marks the destination owner dormant.
    const Region& prev_snap = trace.table_snaps.back();
    for (VertexId u : owners) {
      std::uint64_t ublock =
          static_cast<std::uint64_t>(trace.owner.read(u)) - 1;
      for (std::uint64_t s = 0; s < ts; ++s) {
        Word vcell = prev_snap.read(ublock * ts + s);
        if (vcell == 0) continue;
        VertexId v = static_cast<VertexId>(vcell - 1);
        Word vo = trace.owner.read(v);
        if (vo == 0) continue;
        std::uint64_t vblock = static_cast<std::uint64_t>(vo - 1);
        for (std::uint64_t t = 0; t < ts; ++t) {
          Word wcell = prev_snap.read(vblock * ts + t);
          if (wcell == 0) continue;
          std::uint64_t dest = table_cell(ublock, h_V.eval(
              static_cast<std::uint64_t>(wcell - 1)));
          if (pool.read(dest) != wcell) {
            trace.dormant.write(u, 1, table_cell(ublock, s) * ts + t);
          }
        }
      }
    }
    m.end_step(owners.size() * bs);

    snapshot(round);
    trace.rounds = round;
    if (state.scratch.read(kNewEntryCell) != static_cast<Word>(round)) {
      break;  // no table gained a cell; a repeat round would change nothing
    }
  }
  return trace;
}

void vote(VanillaState& state, const ExpandTrace& trace,
          const std::vector<VertexId>& ongoing, double leader_probability,
          const CoinFn& coins) {
  PramMachine& m = *state.machine;
  for (VertexId v : ongoing) {
    state.leader.write(v, 1, v);
  }
  m.end_step(state.n);

  const std::uint64_t ts = trace.params.table_size;
  const std::uint64_t bs = trace.params.block_size;
  for (VertexId u : ongoing) {
    if (trace.is_dormant(u)) {
      // Dormant vertices cannot see their whole component; they stand for
      // election by coin instead.
      if (!coins(state.phase, u)) state.leader.write(u, 0, u);
      continue;
    }
    Word o = trace.owner.read(u);
    if (o == 0) continue;  // unreachable: blockless vertices are dormant
    std::uint64_t block = static_cast<std::uint64_t>(o - 1);
    for (std::uint64_t s = 0; s < ts; ++s) {
      Word cell = trace.table_pool.read(block * ts + s);
      if (cell != 0 && static_cast<VertexId>(cell - 1) < u) {
        state.leader.write(u, 0, block * bs + s);
      }
    }
  }
  m.end_step(state.n + ongoing.size() * ts);
  (void)leader_probability;
}

void link_with_tables(VanillaState& state, const ExpandTrace& trace) {
  PramMachine& m = *state.machine;
  // Arc neighbors and table entries race for the parent cell together; any
  // leader among them is a valid outcome.
  for (std::size_t a = 0; a < state.arc_count; ++a) {
    VertexId v = state.arc_src(a);
    VertexId w = state.arc_dst(a);
    if (v == w) continue;
    if (state.leader.read(v) == 0 && state.leader.read(w) == 1) {
      state.parent.write(v, w, a);
    }
  }
  const std::uint64_t ts = trace.params.table_size;
  for (VertexId u = 0; u < state.n; ++u) {
    Word o = trace.owner.read(u);
    if (o == 0) continue;
    if (state.leader.read(u) != 0) continue;
    std::uint64_t block = static_cast<std::uint64_t>(o - 1);
    for (std::uint64_t s = 0; s < ts; ++s) {
      Word cell = trace.table_pool.read(block * ts + s);
      if (cell == 0) continue;
      VertexId w = static_cast<VertexId>(cell - 1);
      if (w != u && state.leader.read(w) == 1) {
        state.parent.write(u, w, state.arc_count + block * ts + s);
      }
    }
  }
  m.end_step(state.arc_count + state.n * ts);
}

CcResult run_cc(const Graph& g, std::uint64_t seed, PramMachine& machine,
                const CcOptions& options) {
  Graph work = normalize_density(g);
  VanillaState state =
      init_vanilla_state(machine, work, options.spanning_forest_core);
  if (options.initial_parents) {
    for (VertexId v = 0; v < state.n; ++v) {
      VertexId p = options.initial_parents->parent[v];
      if (p != v) state.parent.write(v, p, v);
    }
    machine.end_step(state.n);
  }

  const Profile& profile = options.profile;
  int c = options.c_override.value_or(profile.c);
  CoinFn prep_coins =
      options.prepare_coins ? options.prepare_coins : default_coins(seed);

  CcResult result;
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
      throw AbortDiagnostic("cc: phase cap " + std::to_string(cap) +
                            " exceeded at n=" + std::to_string(state.n));
    }
    machine.begin_round();
    std::vector<VertexId> ongoing = stamp_ongoing(state);
    std::vector<std::pair<VertexId, VertexId>> arcs_at_start =
        state.current_arcs();

    ExpandParams params =
        ExpandParams::derive(work.edge_count(), n_estimate, profile);
    SeedStream hash_rng(mix_key(seed, 0x68617368ULL, state.phase));
    HashFn h_B = options.forced_h_B
                     ? options.forced_h_B->with_range(params.num_blocks)
                     : sample_hash(state.n, params.num_blocks, hash_rng);
    HashFn h_V = options.forced_h_V
                     ? options.forced_h_V->with_range(params.table_size)
                     : sample_hash(state.n, params.table_size, hash_rng);

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
    link_with_tables(state, trace);
    vanilla_shortcut_step(state);
    vanilla_alter_step(state);

    CcPhaseStats stats;
    stats.phase = result.phases;
    stats.n_estimate = n_estimate;
    stats.b = params.b;
    stats.ongoing = ongoing.size();
    stats.expand_rounds = trace.rounds;

    BudgetUpdate upd = update_budget(n_estimate, work.edge_count(), profile);
    n_estimate = upd.n_next;
    stats.estimate_depleted = upd.near_termination;

    result.expand_rounds_total += trace.rounds;
    result.phase_stats.push_back(stats);
    ++result.phases;

    if (options.observer && options.observer->on_phase_end) {
      CcPhaseView view{state, trace, result.phase_stats.back(), ongoing,
                       arcs_at_start};
      options.observer->on_phase_end(view);
    }
    ++state.phase;
  }
  result.labels = canonical_labels(state.parents());
  return result;
}

}  // namespace pramcc

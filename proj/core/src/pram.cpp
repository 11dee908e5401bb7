#include "pramcc/pram.hpp"

#include <algorithm>

#include "pramcc/rng.hpp"

namespace pramcc {

const char* write_policy_name(WritePolicy policy) {
  switch (policy) {
    case WritePolicy::LowestWriter:
      return "low";
    case WritePolicy::HighestWriter:
      return "high";
    case WritePolicy::SeededRandom:
      return "random";
  }
  return "?";
}

PramMachine::PramMachine(WritePolicy policy, std::uint64_t seed,
                         std::size_t initial_cells)
    : policy_(policy), seed_(seed) {
  memory_.assign(initial_cells, 0);
  touch_stamp_.assign(initial_cells, 0);
  winner_slot_.assign(initial_cells, 0);
}

void PramMachine::fault(std::size_t cell) const {
  throw std::out_of_range("pram: cell " + std::to_string(cell) +
                          " outside memory of " +
                          std::to_string(memory_.size()) + " cells");
}

void PramMachine::submit_write(std::size_t cell, Word value,
                               std::uint64_t writer) {
  if (cell >= memory_.size()) fault(cell);
  buffer_.push_back(Pending{cell, value, writer});
}

bool PramMachine::wins(const Pending& challenger,
                       const Pending& incumbent) const {
  switch (policy_) {
    case WritePolicy::LowestWriter:
      return challenger.writer < incumbent.writer;
    case WritePolicy::HighestWriter:
      return challenger.writer > incumbent.writer;
    case WritePolicy::SeededRandom: {
      // Deterministic per (seed, step, cell, writer); independent of the
      // order submissions were buffered in.
      std::uint64_t a =
          mix_key(seed_, counters_.steps, challenger.cell, challenger.writer);
      std::uint64_t b =
          mix_key(seed_, counters_.steps, incumbent.cell, incumbent.writer);
      if (a != b) return a < b;
      return challenger.writer < incumbent.writer;
    }
  }
  return false;
}

void PramMachine::apply_buffer(bool combining) {
  touched_cells_.clear();
  for (std::size_t slot = 0; slot < buffer_.size(); ++slot) {
    const Pending& w = buffer_[slot];
    if (touch_stamp_[w.cell] != step_token_) {
      touch_stamp_[w.cell] = step_token_;
      winner_slot_[w.cell] = slot;
      touched_cells_.push_back(w.cell);
      if (combining) memory_[w.cell] = 0;
    } else if (!combining && wins(w, buffer_[winner_slot_[w.cell]])) {
      winner_slot_[w.cell] = slot;
    }
    if (combining) memory_[w.cell] += w.value;
  }
  if (!combining) {
    for (std::size_t cell : touched_cells_) {
      memory_[cell] = buffer_[winner_slot_[cell]].value;
    }
  }
  buffer_.clear();
  ++step_token_;
}

void PramMachine::end_step(std::uint64_t processors_active) {
  apply_buffer(false);
  ++counters_.steps;
  counters_.peak_processors =
      std::max(counters_.peak_processors, processors_active);
  if (!ledger_.steps_per_round.empty()) ++ledger_.steps_per_round.back();
}

void PramMachine::end_step_combining_sum(std::uint64_t processors_active) {
  apply_buffer(true);
  ++counters_.steps;
  counters_.peak_processors =
      std::max(counters_.peak_processors, processors_active);
  if (!ledger_.steps_per_round.empty()) ++ledger_.steps_per_round.back();
}

void PramMachine::begin_round() {
  ++counters_.rounds;
  ledger_.steps_per_round.push_back(0);
}

std::size_t PramMachine::allocate_block(std::size_t size, Zone zone) {
  if (size < 1) throw std::invalid_argument("pram: zero-size block");
  if (allocation_cap_ &&
      counters_.total_allocated + size > *allocation_cap_) {
    overflow_reports_.push_back(
        OverflowReport{zone, size, *allocation_cap_});
  }
  std::size_t base = memory_.size();
  memory_.resize(base + size, 0);
  touch_stamp_.resize(base + size, 0);
  winner_slot_.resize(base + size, 0);
  ledger_.allocations[{zone.round, zone.level}] += size;
  counters_.total_allocated += size;
  return base;
}

}  // namespace pramcc

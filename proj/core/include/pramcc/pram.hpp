#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pramcc {

using Word = std::int64_t;

/// Resolution rule for concurrent writes to one cell within a step. The
/// machine model leaves the winner unspecified, so the simulator makes it a
/// configurable, deterministic choice and the test suites run under all of
/// them: an algorithm is only correct if its output does not depend on which
/// writer wins.
enum class WritePolicy { LowestWriter, HighestWriter, SeededRandom };

const char* write_policy_name(WritePolicy policy);

/// Allocation zone: (round, level) charge account in the work ledger.
struct Zone {
  int round = 0;
  int level = 0;
  friend auto operator<=>(const Zone&, const Zone&) = default;
};

/// Per-(round, level) processor/cell allocations plus per-round step counts.
struct WorkLedger {
  std::map<std::pair<int, int>, std::uint64_t> allocations;
  std::vector<std::uint64_t> steps_per_round;

  std::uint64_t total() const {
    std::uint64_t sum = 0;
    for (const auto& [zone, cells] : allocations) sum += cells;
    return sum;
  }
};

struct Counters {
  std::uint64_t steps = 0;
  std::uint64_t rounds = 0;
  std::uint64_t peak_processors = 0;
  std::uint64_t total_allocated = 0;
};

/// Raised when an allocation exceeds the configured cap. Recorded, not
/// thrown: the cap is a test hook.
struct OverflowReport {
  Zone zone;
  std::uint64_t requested = 0;
  std::uint64_t cap = 0;
};

/// Step-synchronous shared-memory machine with buffered concurrent writes.
///
/// Contract: reads during a step observe the memory image left by the
/// previous end_step(); submit_write() only records intent. end_step()
/// resolves all same-cell conflicts by the configured policy, applies the
/// winners atomically, clears the buffer and advances the step counter.
/// Identical (submissions, policy, seed) produce identical memory and
/// counters.
class PramMachine {
 public:
  PramMachine(WritePolicy policy, std::uint64_t seed,
              std::size_t initial_cells = 0);

  WritePolicy policy() const { return policy_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t size() const { return memory_.size(); }

  Word read(std::size_t cell) const {
    if (cell >= memory_.size()) fault(cell);
    return memory_[cell];
  }

  void submit_write(std::size_t cell, Word value, std::uint64_t writer);

  /// Resolve and apply the buffered writes. `processors_active` is the
  /// number of logical processors that took part in the step (readers
  /// included); it feeds the peak-processor counter.
  void end_step(std::uint64_t processors_active);

  /// Test-only resolution mode: same-cell writes combine by summation
  /// instead of picking one winner. Used solely as an oracle for exact
  /// global counts; no algorithm in this repo depends on it.
  void end_step_combining_sum(std::uint64_t processors_active);

  void begin_round();

  /// Grab `size` fresh zero cells charged to `zone`. Blocks never alias.
  /// Exceeding the allocation cap records an overflow report and proceeds.
  std::size_t allocate_block(std::size_t size, Zone zone);

  void set_allocation_cap(std::uint64_t cells) { allocation_cap_ = cells; }
  const std::vector<OverflowReport>& overflow_reports() const {
    return overflow_reports_;
  }

  bool buffer_empty() const { return buffer_.empty(); }
  const Counters& counters() const { return counters_; }
  const WorkLedger& ledger() const { return ledger_; }

 private:
  struct Pending {
    std::size_t cell;
    Word value;
    std::uint64_t writer;
  };

  [[noreturn]] void fault(std::size_t cell) const;
  bool wins(const Pending& challenger, const Pending& incumbent) const;
  void apply_buffer(bool combining);

  WritePolicy policy_;
  std::uint64_t seed_;
  std::vector<Word> memory_;
  std::vector<Pending> buffer_;

  // Per-step winner tracking, version-stamped so steps do not pay for
  // clearing. winner_slot_[cell] points into buffer_ while stamps match.
  std::vector<std::uint64_t> touch_stamp_;
  std::vector<std::size_t> winner_slot_;
  std::vector<std::size_t> touched_cells_;
  std::uint64_t step_token_ = 1;

  Counters counters_;
  WorkLedger ledger_;
  std::optional<std::uint64_t> allocation_cap_;
  std::vector<OverflowReport> overflow_reports_;
};

/// Named span of machine cells; the unit in which algorithms lay out their
/// shared state. Element writes go through the machine's write buffer.
class Region {
 public:
  Region() = default;
  Region(PramMachine* machine, std::size_t base, std::size_t size)
      : machine_(machine), base_(base), size_(size) {}

  std::size_t base() const { return base_; }
  std::size_t size() const { return size_; }
  std::size_t cell(std::size_t index) const { return base_ + index; }

  Word read(std::size_t index) const { return machine_->read(base_ + index); }
  void write(std::size_t index, Word value, std::uint64_t writer) const {
    machine_->submit_write(base_ + index, value, writer);
  }

 private:
  PramMachine* machine_ = nullptr;
  std::size_t base_ = 0;
  std::size_t size_ = 0;
};

/// Thrown when a run trips a bound that is probabilistically impossible at
/// the tested sizes; signals a bug, not an input problem. The experiment
/// harness converts these to failed records instead of crashing.
class AbortDiagnostic : public std::runtime_error {
 public:
  explicit AbortDiagnostic(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace pramcc

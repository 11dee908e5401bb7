#pragma once

#include <cstdint>
#include <string>

namespace pramcc {

/// Tuning constants for the hashing-based algorithms. The `paper` profile
/// carries the published constants, which only produce visible progress on
/// astronomically large inputs; the `desk` profile swaps them for values
/// that show the same mechanics at test sizes. Correctness is independent
/// of the profile, only progress rates change.
struct Profile {
  std::string name;

  // Connected-components / spanning-forest expansion.
  double size_exp;    // b = (m / n_estimate)^size_exp
  double vote_exp;    // dormant leader probability b^-vote_exp
  int c;              // prepare exponent (threshold m/n <= log^c n)

  // Faster connected components.
  int c_fast;         // prepare exponent used by the compaction stage
  double bump_exp;    // level-bump probability b^-bump_exp
  double growth;      // budget schedule b_l = b1^(growth^(l-1))

  std::uint64_t min_block;  // block size floor (always a perfect square)

  static Profile paper();
  static Profile desk();
  static Profile by_name(const std::string& name);
};

/// Per-phase sizes for the expansion, derived from the density estimate
/// delta = m / n_estimate. Steps 3-5 of the expansion back every table cell
/// with table_size processors, so the block is kept a perfect square.
struct ExpandParams {
  double b = 2.0;                // progress parameter, clamped to >= 2
  std::uint64_t block_size = 4;  // perfect square >= 4
  std::uint64_t table_size = 2;  // sqrt(block_size)
  std::uint64_t num_blocks = 1;
  bool b_clamped = false;        // the floor kicked in

  static ExpandParams derive(std::size_t m_edges, double n_estimate,
                             const Profile& profile);
};

/// Round block sizes up to the next perfect square not below `floor`.
std::uint64_t next_square_at_least(std::uint64_t value, std::uint64_t floor);

/// Budget update rule between phases: the phase's b comes from the current
/// estimate, then the estimate shrinks by b^(1/4) for the next phase.
struct BudgetUpdate {
  double n_next = 0.0;
  double b = 2.0;
  bool near_termination = false;  // estimate fell below one vertex
};

BudgetUpdate update_budget(double n_estimate, std::size_t m_edges,
                           const Profile& profile);

/// Phase count the preprocessing stage runs when the graph is sparse.
std::uint64_t prepare_phase_count(std::uint32_t n, int c);

/// Whether the density threshold m/n <= log2(n)^c holds (the sparse branch).
bool prepare_is_sparse(std::size_t m_edges, std::uint32_t n, int c);

}  // namespace pramcc

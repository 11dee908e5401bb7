#include "pramcc/profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pramcc {

Profile Profile::paper() {
  Profile p;
  p.name = "paper";
  p.size_exp = 1.0 / 18.0;
  p.vote_exp = 2.0 / 3.0;
  p.c = 100;
  p.c_fast = 200;
  p.bump_exp = 0.06;
  p.growth = 1.01;
  p.min_block = 4;
  return p;
}

Profile Profile::desk() {
  Profile p;
  p.name = "desk";
  p.size_exp = 1.0 / 3.0;
  p.vote_exp = 2.0 / 3.0;
  p.c = 4;
  p.c_fast = 4;
  p.bump_exp = 0.25;
  p.growth = 1.5;
  p.min_block = 4;
  return p;
}

Profile Profile::by_name(const std::string& name) {
  if (name == "paper") return paper();
  if (name == "desk") return desk();
  throw std::invalid_argument("unknown profile: " + name);
}

std::uint64_t next_square_at_least(std::uint64_t value, std::uint64_t floor) {
  std::uint64_t v = std::max(value, floor);
  std::uint64_t root = static_cast<std::uint64_t>(std::lround(std::sqrt(
      static_cast<double>(v))));
  while (root * root < v) ++root;
  while (root > 1 && (root - 1) * (root - 1) >= v) --root;
  return root * root;
}

ExpandParams ExpandParams::derive(std::size_t m_edges, double n_estimate,
                                  const Profile& profile) {
  ExpandParams params;
  double delta = static_cast<double>(m_edges) / std::max(n_estimate, 1.0);
  delta = std::max(delta, 1.0);
  params.b = std::pow(delta, profile.size_exp);
  if (params.b < 2.0) {
    params.b = 2.0;
    params.b_clamped = true;
  }
  params.block_size = next_square_at_least(
      static_cast<std::uint64_t>(std::ceil(std::pow(delta, 2.0 / 3.0))),
      profile.min_block);
  params.table_size = static_cast<std::uint64_t>(std::lround(
      std::sqrt(static_cast<double>(params.block_size))));
  params.num_blocks =
      std::max<std::uint64_t>(1, m_edges / params.block_size);
  return params;
}

BudgetUpdate update_budget(double n_estimate, std::size_t m_edges,
                           const Profile& profile) {
  if (n_estimate < 1.0) {
    throw std::invalid_argument("update_budget: estimate below one vertex");
  }
  BudgetUpdate upd;
  double delta = static_cast<double>(m_edges) / n_estimate;
  upd.b = std::max(2.0, std::pow(std::max(delta, 1.0), profile.size_exp));
  upd.n_next = n_estimate / std::pow(upd.b, 0.25);
  if (upd.n_next < 1.0) {
    upd.n_next = 1.0;
    upd.near_termination = true;
  }
  return upd;
}

std::uint64_t prepare_phase_count(std::uint32_t n, int c) {
  if (n < 2 || c <= 0) return 0;
  double loglog = std::log2(static_cast<double>(n));
  if (loglog <= 1.0) return 0;
  double phases = c * std::log(loglog) / std::log(8.0 / 7.0);
  return static_cast<std::uint64_t>(std::ceil(phases));
}

bool prepare_is_sparse(std::size_t m_edges, std::uint32_t n, int c) {
  if (n < 1) return false;
  double threshold = std::pow(std::log2(std::max<double>(n, 2.0)),
                              static_cast<double>(c));
  return static_cast<double>(m_edges) / static_cast<double>(n) <= threshold;
}

}  // namespace pramcc

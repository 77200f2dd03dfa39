#pragma once

#include <array>
#include <optional>
#include <vector>

#include "perfiso/isometry.hpp"

namespace perfiso {

enum class Strategy { EXHAUSTIVE, PROOF_GUIDED };

struct SearchConfig {
  Strategy strategy = Strategy::EXHAUSTIVE;
  std::optional<unsigned long long> node_limit;
  int parallel_width = 0; // 0: use all hardware threads

  static SearchConfig exhaustive() { return SearchConfig{}; }
  static SearchConfig proof_guided() {
    return SearchConfig{Strategy::PROOF_GUIDED, std::nullopt, 0};
  }
};

struct GroupReport {
  long order = 0;
  bool closure_verified = false;
  std::optional<bool> family_matched;
};

struct EnumerationResult {
  std::vector<SignedBijection> isometries; // canonically sorted
  long count = 0;
  unsigned long long nodes_visited = 0;
  bool node_limit_hit = false;
  unsigned long long full_checks = 0;          // candidates both checkers saw
  unsigned long long checker_disagreements = 0; // must stay 0
  std::optional<GroupReport> group_report;

  bool contains(const SignedBijection &iso) const;
};

/// Cached model blocks.
BlockPtr a4_block();
BlockPtr a5_principal_block();
BlockPtr cyclic_block(int n);           // O C_{2^n}
BlockPtr product_block_c2n_a4(int n);   // O (C_{2^n} x A4), n >= 1

/// chi_j -> eps delta_j delta_{sigma(j)} chi_{sigma(j)} with
/// delta = (1,1,1,-1); sigma is 0-indexed.
SignedBijection make_I_sigma_eps(const BlockPtr &a4_type_block,
                                 const std::array<int, 4> &sigma, int eps);
/// theta_i -> eps theta_{j(i+l)} on O C_{2^n}; j odd.
SignedBijection make_I_jl_eps(int n, long j, long l, int eps);

std::vector<SignedBijection> sigma_eps_family(const BlockPtr &a4_type_block);
std::vector<SignedBijection> jl_family(int n);
/// tensor(I_{j,l,+1}, I_{sigma,eps}) on O (C_{2^n} x A4).
std::vector<SignedBijection> tensor_family(int n);

EnumerationResult enumerate_self_perfect(const BlockPtr &b, CtxPtr ctx,
                                         const SearchConfig &cfg);
EnumerationResult enumerate_perfect_between(const BlockPtr &b,
                                            const BlockPtr &c, CtxPtr ctx,
                                            const SearchConfig &cfg);

/// Closure/order report for a self-enumeration; throws std::logic_error on a
/// closure failure (that would mean a checker bug).
GroupReport group_structure(const EnumerationResult &r);

struct NodeLimitExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace perfiso

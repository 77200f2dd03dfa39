#pragma once

#include <array>
#include <optional>

#include "perfiso/isometry.hpp"

namespace perfiso {

/// Index-2 covering data: how the characters of the overgroup block pair up
/// over the characters of the subgroup block.
struct CoveringData {
  Embedding embedding;
  BlockPtr sup_block, sub_block;
  std::vector<std::array<int, 2>> fibers; // per sub position, sup positions
  std::vector<int> fiber_of;              // sup position -> sub position
};

/// Restrict every character of B and group by the irreducible of b it hits.
/// Throws std::domain_error if a restriction fails to be irreducible or a
/// fiber does not have exactly two members.
CoveringData covering_fusion(const Embedding &e, const BlockPtr &sup_block,
                             const BlockPtr &sub_block);

/// chi -> sgn . chi where sgn is -1 exactly off the subgroup's classes.
/// All signs +1; swaps the two members of every fiber.
SignedBijection sgn_twist(const BlockPtr &sup_block, const Embedding &e);

/// Does iso map each source fiber onto a single target fiber with one sign?
bool check_descent_hypothesis(const SignedBijection &iso,
                              const CoveringData &f, const CoveringData &fp);

struct DescentResult {
  bool hypothesis_held = false;
  std::optional<SignedBijection> descended;
  PerfectionReport lattice_report, mu_report;
};

DescentResult descend(const SignedBijection &iso, const CoveringData &f,
                      const CoveringData &fp, CtxPtr ctx);
/// Variant reusing a prebuilt checker for the subgroup block pair.
DescentResult descend(const SignedBijection &iso, const CoveringData &f,
                      const CoveringData &fp, const IsoChecker &sub_checker);

/// Fiber-sum idempotents correspond under iso exactly as the descended map
/// prescribes, and the descended map passes the centre check.
bool verify_centre_restriction(const SignedBijection &iso,
                               const CoveringData &f, const CoveringData &fp,
                               CtxPtr ctx);

} // namespace perfiso

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "perfiso/blocks.hpp"
#include "perfiso/dvrlat.hpp"

#include <nlohmann/json_fwd.hpp>

namespace perfiso {

/// A candidate isometry: a permutation of character positions plus a sign per
/// character.  Positions index into the blocks' char_indices.
struct SignedBijection {
  BlockPtr source, target;
  std::vector<int> perm;  // source position -> target position
  std::vector<int> signs; // +1 / -1 per source position

  SignedBijection() = default;
  SignedBijection(BlockPtr src, BlockPtr tgt, std::vector<int> p,
                  std::vector<int> s);

  /// Canonical key (perm then signs) for ordering and set membership.
  std::vector<int> key() const;

  nlohmann::json to_json() const;
  static SignedBijection from_json(BlockPtr src, BlockPtr tgt,
                                   const nlohmann::json &j);
};

bool same_block(const Block &a, const Block &b);

struct Witness {
  std::string checker;  // "cf", "cf_pprime", "mu", "central"
  int i = -1, j = -1;   // generator id / class pair
  std::string condition;

  nlohmann::json to_json() const;
};

struct PerfectionReport {
  bool verdict = false;
  std::vector<Witness> failures;

  nlohmann::json to_json() const;
};

/// Precomputed data for checking candidates between a fixed block pair.
/// Construction is serial; the check methods are const and safe to call
/// concurrently.
class IsoChecker {
public:
  enum Pieces { CF = 1, MU = 2, CENTRAL = 4, PRJ = 8, ALL = 15 };

  IsoChecker(BlockPtr b, BlockPtr c, CtxPtr ctx, int pieces = CF | MU | PRJ);

  const BlockPtr &source() const { return b_; }
  const BlockPtr &target() const { return c_; }
  const CtxPtr &context() const { return ctx_; }

  /// Definition-level checker: generators of both CF lattices (and the
  /// 2-regular sublattices) must map into their counterparts both ways.
  PerfectionReport lattice_check(const SignedBijection &iso,
                                 bool collect_all = false) const;

  /// Bicharacter checker: integrality of mu against both centralizer orders
  /// and vanishing on mixed-regularity class pairs.
  PerfectionReport mu_check(const SignedBijection &iso,
                            bool collect_all = false) const;

  /// Induced centre map: class-sum vectors must generate the same O-span on
  /// both sides under the (sign-free) character bijection.
  PerfectionReport central_check(const SignedBijection &iso,
                                 bool collect_all = false) const;

  /// Integer prefilter: the signed permutation must carry the projective
  /// lattice onto the projective lattice.
  bool prj_preserved(const std::vector<int> &perm,
                     const std::vector<int> &signs) const;

  /// v2 of |G| / chi(1) per source/target position.
  const std::vector<long> &codegree_src() const { return cod_src_; }
  const std::vector<long> &codegree_tgt() const { return cod_tgt_; }

private:
  BlockPtr b_, c_;
  CtxPtr ctx_;
  unsigned long m_;
  DvrLattice cf_src_, cf_tgt_, cfp_src_, cfp_tgt_;
  DvrLattice central_src_, central_tgt_;
  std::vector<std::vector<CycNum>> omega_src_, omega_tgt_; // [class][position]
  std::vector<std::vector<CycNum>> val_src_;   // [position][class], lifted
  std::vector<std::vector<CycNum>> conj_tgt_;  // [position][class], conjugated
  std::vector<long> cent_v_src_, cent_v_tgt_;  // e * v2(centralizer)
  std::vector<char> reg_src_, reg_tgt_;
  IntMat prj_tgt_hnf_, prj_src_hnf_;
  bool prj_rank_mismatch_ = false;
  std::optional<Lat64> prj_tgt_64_, prj_src_64_;
  std::vector<std::vector<long>> prj_src_rows_, prj_tgt_rows_;
  std::vector<long> cod_src_, cod_tgt_;
};

/// One-shot forms of the checkers (build an IsoChecker internally).
PerfectionReport is_perfect_lattice(const SignedBijection &iso, CtxPtr ctx);
PerfectionReport is_perfect_mu(const SignedBijection &iso, CtxPtr ctx);
PerfectionReport central_iso_check(const SignedBijection &iso, CtxPtr ctx);

/// mu(g, h) = sum_chi chi(g) * conj((I chi)(h)); rows = source classes,
/// columns = target classes.
std::vector<std::vector<CycNum>> mu_matrix(const SignedBijection &iso);

SignedBijection identity_isometry(BlockPtr b);
/// compose(i, j): apply i first, then j.
SignedBijection compose(const SignedBijection &i, const SignedBijection &j);
SignedBijection invert(const SignedBijection &i);
/// Product-block isometry (theta tensor chi) -> +- (i1 theta tensor i2 chi);
/// both factors must be full-table blocks.
SignedBijection tensor(const SignedBijection &i1, const SignedBijection &i2);

/// Full product table of two full-table blocks, as a block (cached).
BlockPtr product_block(const BlockPtr &b1, const BlockPtr &b2);

} // namespace perfiso

#pragma once

#include <memory>
#include <vector>

#include "perfiso/blocks.hpp"
#include "perfiso/cyclotomic.hpp"

namespace perfiso {

/// Full- or lower-rank O_P-lattice in K^dim, kept in valuation-pivoted
/// echelon form with precomputed pivot inverses.  Membership of v reduces v
/// by each pivot in turn; the coefficient must have valuation >= 0 and the
/// remainder must vanish.
class DvrLattice {
public:
  DvrLattice() = default;

  /// Triangularize a generating set (rows at the context conductor).  The
  /// O-span is preserved; zero rows are dropped.
  static DvrLattice from_generators(CtxPtr ctx,
                                    std::vector<std::vector<CycNum>> rows);

  int dim() const { return dim_; }
  int rank() const { return int(rows_.size()); }
  const std::vector<std::vector<CycNum>> &rows() const { return rows_; }
  const CtxPtr &context() const { return ctx_; }

  /// witness (if non-null) receives the failing pivot row, or -1 when the
  /// remainder after reduction is nonzero (vector outside the K-span).
  bool contains(const std::vector<CycNum> &v, int *witness = nullptr) const;

private:
  CtxPtr ctx_;
  int dim_ = 0;
  std::vector<std::vector<CycNum>> rows_;
  std::vector<int> pivot_col_;
  std::vector<CycNum> pivot_inv_;
};

/// O_P-lattice of coefficient vectors a with sum a_chi chi(g) in O_P for all
/// g; with pprime_only additionally vanishing at every 2-singular class.
DvrLattice cf_lattice(const Block &b, CtxPtr ctx, bool pprime_only);

/// O_P-span of the central-character vectors (omega_chi(C-hat))_chi over all
/// classes C; coordinates of Z(B) seen through its characters.
DvrLattice central_character_lattice(const Block &b, CtxPtr ctx);

} // namespace perfiso

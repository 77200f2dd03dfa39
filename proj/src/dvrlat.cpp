#include "perfiso/dvrlat.hpp"

#include <cassert>

namespace perfiso {

namespace {

struct EchelonRow {
  std::vector<CycNum> v;
  int pivot = -1;
  long pivot_val = 0;
};

// Valuation-pivoted echelon over the DVR.  Pivot selection takes the entry of
// globally minimal valuation among unprocessed rows and columns, so row
// operations have O-multipliers (the O-span is unchanged) and each pivot
// valuation is the minimum over its whole row tail.
std::vector<EchelonRow> dvr_echelon(const CtxPtr &ctx,
                                    std::vector<std::vector<CycNum>> rows) {
  size_t dim = rows.empty() ? 0 : rows[0].size();
  std::vector<bool> row_done(rows.size(), false), col_done(dim, false);
  std::vector<EchelonRow> out;
  for (;;) {
    bool found = false;
    long best_val = 0;
    size_t best_r = 0, best_c = 0;
    for (size_t c = 0; c < dim; ++c) {
      if (col_done[c]) continue;
      for (size_t r = 0; r < rows.size(); ++r) {
        if (row_done[r] || rows[r][c].is_zero()) continue;
        long v = ctx->valuation(rows[r][c]).v;
        if (!found || v < best_val) {
          found = true;
          best_val = v;
          best_r = r;
          best_c = c;
        }
      }
    }
    if (!found) break;
    CycNum pivot_inv = rows[best_r][best_c].inverse();
    for (size_t r = 0; r < rows.size(); ++r) {
      if (r == best_r || row_done[r] || rows[r][best_c].is_zero()) continue;
      CycNum m = rows[r][best_c] * pivot_inv;
      for (size_t c = 0; c < dim; ++c)
        if (!rows[best_r][c].is_zero()) rows[r][c] -= m * rows[best_r][c];
    }
    row_done[best_r] = true;
    col_done[best_c] = true;
    out.push_back({std::move(rows[best_r]), int(best_c), best_val});
  }
  return out;
}

} // namespace

DvrLattice DvrLattice::from_generators(CtxPtr ctx,
                                       std::vector<std::vector<CycNum>> rows) {
  DvrLattice l;
  l.ctx_ = ctx;
  l.dim_ = rows.empty() ? 0 : int(rows[0].size());
  unsigned long M = ctx->conductor();
  for (auto &r : rows)
    for (auto &x : r) x = x.lifted_to(M);
  auto ech = dvr_echelon(ctx, std::move(rows));
  for (auto &er : ech) {
    l.pivot_col_.push_back(er.pivot);
    l.pivot_inv_.push_back(er.v[er.pivot].inverse());
    l.rows_.push_back(std::move(er.v));
  }
  return l;
}

bool DvrLattice::contains(const std::vector<CycNum> &v, int *witness) const {
  assert(int(v.size()) == dim_);
  std::vector<CycNum> x = v;
  unsigned long M = ctx_->conductor();
  for (auto &e : x) e = e.lifted_to(M);
  for (size_t r = 0; r < rows_.size(); ++r) {
    const CycNum &xe = x[pivot_col_[r]];
    if (xe.is_zero()) continue;
    CycNum c = xe * pivot_inv_[r];
    if (!ctx_->val_at_least(c, 0)) {
      if (witness) *witness = int(r);
      return false;
    }
    for (int j = 0; j < dim_; ++j)
      if (!rows_[r][j].is_zero()) x[j] -= c * rows_[r][j];
  }
  for (const auto &e : x)
    if (!e.is_zero()) {
      if (witness) *witness = -1;
      return false;
    }
  return true;
}

DvrLattice cf_lattice(const Block &b, CtxPtr ctx, bool pprime_only) {
  const CharTable &t = *b.table;
  unsigned long M = ctx->conductor();
  int k = b.k(), c = t.num_classes();

  // value matrix of the block rows, lifted once
  std::vector<std::vector<CycNum>> val(k, std::vector<CycNum>(c));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < c; ++j)
      val[i][j] = t.values[b.char_indices[i]][j].lifted_to(M);

  // CF is squeezed between pi^{-N} O^k and O^k with N = e*v2(|G|): the
  // orthogonality relations bound every coefficient by |G|^{-1} times an
  // integral combination.
  long n_bound = ctx->ram_e() * v2_int(mpz_class(t.group_order));
  CycNum pi_inv_pow = CycNum::integer(1);
  {
    CycNum pinv = ctx->uniformizer().inverse();
    for (long i = 0; i < n_bound; ++i) pi_inv_pow *= pinv;
    pi_inv_pow = pi_inv_pow.lifted_to(M);
  }
  std::vector<std::vector<CycNum>> gen(k, std::vector<CycNum>(k));
  for (int i = 0; i < k; ++i) gen[i][i] = pi_inv_pow;

  // refine by one integrality condition per class
  for (int j = 0; j < c; ++j) {
    std::vector<CycNum> tval(k);
    std::vector<Valuation> tv(k);
    long min_val = 0;
    int r0 = -1;
    for (int r = 0; r < k; ++r) {
      CycNum s;
      for (int i = 0; i < k; ++i)
        if (!gen[r][i].is_zero()) s += gen[r][i] * val[i][j];
      tval[r] = s;
      tv[r] = ctx->valuation(s);
      if (!tv[r].infinite && tv[r].v < min_val) {
        min_val = tv[r].v;
        r0 = r;
      }
    }
    if (r0 < 0) continue; // all values already integral
    CycNum t0_inv = tval[r0].inverse();
    std::vector<CycNum> keep = gen[r0];
    for (int r = 0; r < k; ++r) {
      if (r == r0 || tval[r].is_zero()) continue;
      CycNum m = tval[r] * t0_inv;
      for (int i = 0; i < k; ++i)
        if (!keep[i].is_zero()) gen[r][i] -= m * keep[i];
    }
    CycNum pi_pow = CycNum::integer(1);
    for (long i = 0; i < -min_val; ++i) pi_pow *= ctx->uniformizer();
    pi_pow = pi_pow.lifted_to(M);
    for (int i = 0; i < k; ++i) gen[r0][i] = keep[i] * pi_pow;
  }

  if (!pprime_only) return DvrLattice::from_generators(ctx, std::move(gen));

  // intersect with the kernel of evaluation at 2-singular classes
  std::vector<int> singular;
  for (int j = 0; j < c; ++j)
    if (!t.classes[j].is_2regular) singular.push_back(j);
  if (singular.empty()) return DvrLattice::from_generators(ctx, std::move(gen));

  // conditions in generator coordinates: y * D = 0, D[r][s] = g_r . w_s
  int s_count = int(singular.size());
  std::vector<std::vector<CycNum>> d(k, std::vector<CycNum>(s_count));
  for (int r = 0; r < k; ++r)
    for (int s = 0; s < s_count; ++s) {
      CycNum acc;
      for (int i = 0; i < k; ++i)
        if (!gen[r][i].is_zero()) acc += gen[r][i] * val[i][singular[s]];
      d[r][s] = acc;
    }

  // field kernel of D (rows y with yD = 0)
  std::vector<std::vector<CycNum>> work = d;
  std::vector<std::vector<CycNum>> track(k, std::vector<CycNum>(k));
  for (int i = 0; i < k; ++i) track[i][i] = CycNum::integer(1);
  int rank = 0;
  for (int col = 0; col < s_count && rank < k; ++col) {
    int sel = -1;
    for (int r = rank; r < k; ++r)
      if (!work[r][col].is_zero()) {
        sel = r;
        break;
      }
    if (sel < 0) continue;
    std::swap(work[sel], work[rank]);
    std::swap(track[sel], track[rank]);
    CycNum inv = work[rank][col].inverse();
    for (int r = 0; r < k; ++r) {
      if (r == rank || work[r][col].is_zero()) continue;
      CycNum m = work[r][col] * inv;
      for (int cc = 0; cc < s_count; ++cc)
        if (!work[rank][cc].is_zero()) work[r][cc] -= m * work[rank][cc];
      for (int cc = 0; cc < k; ++cc)
        if (!track[rank][cc].is_zero()) track[r][cc] -= m * track[rank][cc];
    }
    ++rank;
  }
  std::vector<std::vector<CycNum>> kernel_rows(track.begin() + rank,
                                               track.end());

  // y ranges over ker(D) ∩ O^k: echelonize and rescale each row so its
  // minimal valuation becomes 0 (global-min pivoting makes the pivot carry
  // the row minimum)
  auto ech = dvr_echelon(ctx, std::move(kernel_rows));
  std::vector<std::vector<CycNum>> basis_rows;
  for (auto &er : ech) {
    CycNum scale = CycNum::integer(1);
    CycNum pi = ctx->uniformizer().lifted_to(ctx->conductor());
    CycNum pinv = pi.inverse();
    for (long i = 0; i < er.pivot_val; ++i) scale *= pinv;
    for (long i = 0; i < -er.pivot_val; ++i) scale *= pi;
    std::vector<CycNum> row(er.v.size());
    for (size_t i = 0; i < er.v.size(); ++i)
      if (!er.v[i].is_zero()) row[i] = er.v[i] * scale;
    basis_rows.push_back(std::move(row));
  }

  // map back to coefficient coordinates: rows (y * gen)
  std::vector<std::vector<CycNum>> out;
  for (const auto &y : basis_rows) {
    std::vector<CycNum> row(k);
    for (int r = 0; r < k; ++r) {
      if (y[r].is_zero()) continue;
      for (int i = 0; i < k; ++i)
        if (!gen[r][i].is_zero()) row[i] += y[r] * gen[r][i];
    }
    out.push_back(std::move(row));
  }
  return DvrLattice::from_generators(ctx, std::move(out));
}

DvrLattice central_character_lattice(const Block &b, CtxPtr ctx) {
  const CharTable &t = *b.table;
  unsigned long M = ctx->conductor();
  std::vector<std::vector<CycNum>> gen;
  for (int j = 0; j < t.num_classes(); ++j) {
    std::vector<CycNum> row(b.k());
    for (int i = 0; i < b.k(); ++i)
      row[i] = central_character(t, b.char_indices[i], j).lifted_to(M);
    gen.push_back(std::move(row));
  }
  DvrLattice l = DvrLattice::from_generators(ctx, std::move(gen));
  if (l.rank() != b.k())
    throw std::logic_error("central character lattice rank deficient");
  return l;
}

} // namespace perfiso

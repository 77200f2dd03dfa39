#include "perfiso/intmat.hpp"

#include <cassert>
#include <cstdlib>

namespace perfiso {

IntMat IntMat::identity(int n) {
  IntMat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

void IntMat::append_row(const std::vector<mpz_class> &row) {
  assert(rows_ == 0 ? cols_ == 0 || int(row.size()) == cols_
                    : int(row.size()) == cols_);
  if (rows_ == 0 && cols_ == 0) cols_ = int(row.size());
  a_.insert(a_.end(), row.begin(), row.end());
  ++rows_;
}

std::vector<mpz_class> IntMat::row(int i) const {
  return std::vector<mpz_class>(a_.begin() + size_t(i) * cols_,
                                a_.begin() + size_t(i + 1) * cols_);
}

void IntMat::swap_rows(int i, int j) {
  if (i == j) return;
  for (int c = 0; c < cols_; ++c) std::swap(at(i, c), at(j, c));
}

bool IntMat::operator==(const IntMat &o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

namespace {

void submul_row(IntMat &m, int dst, int src, const mpz_class &q) {
  for (int j = 0; j < m.cols(); ++j) m.at(dst, j) -= q * m.at(src, j);
}

void negate_row(IntMat &m, int i) {
  for (int j = 0; j < m.cols(); ++j) m.at(i, j) = -m.at(i, j);
}

// Row echelon reduction over Z via Euclidean elimination.  Row operations are
// mirrored onto *track when given.  Returns the pivot columns.
std::vector<int> echelon(IntMat &m, IntMat *track) {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
    for (;;) {
      int best = -1, nonzero = 0;
      for (int i = r; i < m.rows(); ++i) {
        if (m.at(i, c) != 0) {
          ++nonzero;
          if (best < 0 || cmp(abs(m.at(i, c)), abs(m.at(best, c))) < 0)
            best = i;
        }
      }
      if (best < 0) break; // column already clear
      if (nonzero == 1) {
        m.swap_rows(r, best);
        if (track) track->swap_rows(r, best);
        if (m.at(r, c) < 0) {
          negate_row(m, r);
          if (track) negate_row(*track, r);
        }
        pivots.push_back(c);
        ++r;
        break;
      }
      // |best| is minimal, so every other nonzero entry shrinks to a
      // remainder < |best|; iterating terminates (Euclid).
      for (int i = r; i < m.rows(); ++i) {
        if (i == best || m.at(i, c) == 0) continue;
        mpz_class q = m.at(i, c) / m.at(best, c);
        if (q != 0) {
          submul_row(m, i, best, q);
          if (track) submul_row(*track, i, best, q);
        }
      }
    }
  }
  return pivots;
}

} // namespace

IntMat hnf(const IntMat &input) {
  IntMat m = input;
  std::vector<int> pivots = echelon(m, nullptr);
  int r = int(pivots.size());
  // reduce above-pivot entries in increasing pivot order so that later
  // reductions only touch later columns
  for (int i = 0; i < r; ++i) {
    int c = pivots[i];
    for (int k = 0; k < i; ++k) {
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), m.at(k, c).get_mpz_t(), m.at(i, c).get_mpz_t());
      if (q != 0) submul_row(m, k, i, q);
    }
  }
  IntMat out(r, m.cols());
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < m.cols(); ++j) out.at(i, j) = m.at(i, j);
  return out;
}

IntMat left_kernel(const IntMat &input) {
  IntMat m = input;
  IntMat u = IntMat::identity(m.rows());
  std::vector<int> pivots = echelon(m, &u);
  int r = int(pivots.size());
  IntMat ker(0, 0);
  for (int i = r; i < m.rows(); ++i) ker.append_row(u.row(i));
  if (ker.rows() == 0) return IntMat(0, m.rows());
  return hnf(ker);
}

bool in_row_lattice(const IntMat &h, const std::vector<mpz_class> &v) {
  assert(int(v.size()) == h.cols());
  std::vector<mpz_class> x = v;
  int row = 0;
  for (int c = 0; c < h.cols(); ++c) {
    if (row < h.rows() && h.at(row, c) != 0) {
      mpz_class q, rem;
      mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), x[c].get_mpz_t(),
                  h.at(row, c).get_mpz_t());
      if (rem != 0) return false;
      if (q != 0)
        for (int j = c; j < h.cols(); ++j) x[j] -= q * h.at(row, j);
      ++row;
    } else if (x[c] != 0) {
      return false;
    }
  }
  return true;
}

bool same_lattice(const IntMat &a, const IntMat &b) { return hnf(a) == hnf(b); }

int rank_of_hnf(const IntMat &h) { return h.rows(); }

std::optional<Lat64> Lat64::from(const IntMat &h) {
  if (h.cols() > 32) return std::nullopt;
  Lat64 l;
  l.dim = h.cols();
  l.nrows = h.rows();
  l.row.resize(h.rows());
  l.pivot_col.resize(h.rows());
  for (int i = 0; i < h.rows(); ++i) {
    l.row[i].fill(0);
    int pc = -1;
    for (int j = 0; j < h.cols(); ++j) {
      if (!h.at(i, j).fits_slong_p()) return std::nullopt;
      long v = h.at(i, j).get_si();
      if (std::abs(v) > (int64_t(1) << 40)) return std::nullopt;
      l.row[i][j] = v;
      if (pc < 0 && v != 0) pc = j;
    }
    if (pc < 0) return std::nullopt;
    l.pivot_col[i] = pc;
  }
  return l;
}

bool Lat64::contains(int64_t *v) const {
  int r = 0;
  for (int c = 0; c < dim; ++c) {
    if (r < nrows && pivot_col[r] == c) {
      int64_t p = row[r][c];
      if (v[c] % p != 0) return false;
      int64_t q = v[c] / p;
      if (q != 0)
        for (int j = c; j < dim; ++j) v[j] -= q * row[r][j];
      ++r;
    } else if (v[c] != 0) {
      return false;
    }
  }
  return true;
}

} // namespace perfiso

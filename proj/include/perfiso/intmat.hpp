#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace perfiso {

/// Dense integer matrix with exact (GMP) entries.  Rows are the primary
/// objects throughout: lattices are given by their rows.
class IntMat {
public:
  IntMat() : rows_(0), cols_(0) {}
  IntMat(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  mpz_class &at(int i, int j) { return a_[size_t(i) * cols_ + j]; }
  const mpz_class &at(int i, int j) const { return a_[size_t(i) * cols_ + j]; }

  static IntMat identity(int n);

  void append_row(const std::vector<mpz_class> &row);
  std::vector<mpz_class> row(int i) const;
  void swap_rows(int i, int j);

  bool operator==(const IntMat &o) const;

private:
  int rows_, cols_;
  std::vector<mpz_class> a_;
};

/// Canonical row Hermite normal form: zero rows dropped, pivots positive,
/// entries above each pivot reduced into [0, pivot).
IntMat hnf(const IntMat &m);

/// Basis (in HNF) of { x : x * m == 0 }, the left kernel lattice.
IntMat left_kernel(const IntMat &m);

/// Does v lie in the row lattice of h?  h must be in HNF.
bool in_row_lattice(const IntMat &h, const std::vector<mpz_class> &v);

/// Row-lattice equality via HNF comparison.
bool same_lattice(const IntMat &a, const IntMat &b);

int rank_of_hnf(const IntMat &h);

/// Small triangular solver over int64 mirroring an HNF basis; used in
/// enumeration prefilters where GMP would dominate the runtime.
struct Lat64 {
  int dim = 0;
  int nrows = 0;
  // rows in HNF order; pivot_col[r] = leading column of row r
  std::vector<std::array<int64_t, 32>> row;
  std::vector<int> pivot_col;

  static std::optional<Lat64> from(const IntMat &h);
  // v has length dim; destroyed during the test
  bool contains(int64_t *v) const;
};

} // namespace perfiso

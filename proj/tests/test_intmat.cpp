#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "perfiso/intmat.hpp"

using namespace perfiso;

namespace {

IntMat from_rows(const std::vector<std::vector<long>> &rows) {
  IntMat m(0, 0);
  for (const auto &r : rows) {
    std::vector<mpz_class> row(r.begin(), r.end());
    m.append_row(row);
  }
  return m;
}

// brute-force membership oracle: search small integer combinations
bool brute_member(const IntMat &gens, const std::vector<mpz_class> &v,
                  int bound) {
  int r = gens.rows();
  std::vector<long> c(r, -bound);
  for (;;) {
    std::vector<mpz_class> acc(gens.cols(), 0);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < gens.cols(); ++j) acc[j] += c[i] * gens.at(i, j);
    if (acc == v) return true;
    int p = 0;
    while (p < r && c[p] == bound) c[p++] = -bound;
    if (p == r) return false;
    ++c[p];
  }
}

} // namespace

TEST_CASE("hnf canonical form") {
  IntMat m = from_rows({{2, 4, 4}, {-6, 6, 12}, {10, 4, 16}});
  IntMat h = hnf(m);
  // row lattice unchanged
  for (int i = 0; i < m.rows(); ++i) CHECK(in_row_lattice(h, m.row(i)));
  for (int i = 0; i < h.rows(); ++i) {
    // pivots positive
    int c = 0;
    while (c < h.cols() && h.at(i, c) == 0) ++c;
    REQUIRE(c < h.cols());
    CHECK(h.at(i, c) > 0);
  }
  // idempotent
  CHECK(hnf(h) == h);
}

TEST_CASE("membership agrees with a brute-force oracle") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<std::vector<long>> rows(2, std::vector<long>(3));
    for (auto &r : rows)
      for (auto &x : r) x = long(rng() % 7) - 3;
    IntMat gens = from_rows(rows);
    IntMat h = hnf(gens);
    if (h.rows() == 0) continue;
    std::vector<long> probe(3);
    for (auto &x : probe) x = long(rng() % 9) - 4;
    std::vector<mpz_class> v(probe.begin(), probe.end());
    CHECK(in_row_lattice(h, v) == brute_member(gens, v, 6));
  }
}

TEST_CASE("left kernel") {
  // rows (1,2), (2,4): kernel of x*A = 0 is spanned by (2,-1)
  IntMat a = from_rows({{1, 2}, {2, 4}});
  IntMat k = left_kernel(a);
  REQUIRE(k.rows() == 1);
  std::vector<mpz_class> prod(2, 0);
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i) prod[j] += k.at(0, i) * a.at(i, j);
  CHECK(prod == std::vector<mpz_class>(2, 0));
  CHECK(abs(k.at(0, 0) * 1 + k.at(0, 1) * 2) == 0);

  // full-rank matrix has trivial kernel
  IntMat b = from_rows({{1, 0}, {0, 1}});
  CHECK(left_kernel(b).rows() == 0);
}

TEST_CASE("lat64 mirrors gmp membership") {
  IntMat m = from_rows({{2, 1, 0}, {0, 3, 1}});
  IntMat h = hnf(m);
  auto l = Lat64::from(h);
  REQUIRE(l.has_value());
  std::mt19937 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<long> probe(3);
    for (auto &x : probe) x = long(rng() % 13) - 6;
    std::vector<mpz_class> v(probe.begin(), probe.end());
    int64_t buf[32] = {probe[0], probe[1], probe[2]};
    CHECK(l->contains(buf) == in_row_lattice(h, v));
  }
}

TEST_CASE("same_lattice") {
  IntMat a = from_rows({{1, 1}, {0, 2}});
  IntMat b = from_rows({{1, 3}, {1, 1}});
  CHECK(same_lattice(a, b));
  IntMat c = from_rows({{1, 0}, {0, 1}});
  CHECK(!same_lattice(a, c));
}

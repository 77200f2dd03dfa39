#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>

#include "perfiso/blocks.hpp"

using namespace perfiso;

static CtxPtr ctx_of(const TablePtr &t, int factor = 0) {
  return std::make_shared<const PrimeContext>(context_conductor(*t), factor);
}

TEST_CASE("A4 is a single block of defect 2") {
  auto t = a4_table();
  auto blocks = partition_blocks(t, *ctx_of(t));
  REQUIRE(blocks.size() == 1);
  CHECK(blocks[0]->k() == 4);
  CHECK(blocks[0]->defect == 2);
  CHECK(blocks[0]->l() == 3);
  // prj lattice equals the span of chi_j + chi_4
  IntMat want(0, 0);
  for (int j = 0; j < 3; ++j) {
    std::vector<mpz_class> row(4);
    row[j] = 1;
    row[3] = 1;
    want.append_row(row);
  }
  CHECK(same_lattice(blocks[0]->prj_basis, want));
}

TEST_CASE("A5 splits into the principal block and a defect-zero block") {
  auto t = a5_table();
  auto blocks = partition_blocks(t, *ctx_of(t));
  REQUIRE(blocks.size() == 2);
  CHECK(blocks[0]->char_indices == std::vector<int>{0, 1, 2, 4});
  CHECK(blocks[0]->defect == 2);
  CHECK(blocks[0]->l() == 3);
  CHECK(blocks[1]->char_indices == std::vector<int>{3});
  CHECK(blocks[1]->defect == 0);
  CHECK(blocks[1]->l() == 1);
  auto inv = block_invariants(*blocks[0]);
  CHECK(inv.k == 4);
  CHECK(inv.l == 3);
  CHECK(inv.defect == 2);
}

TEST_CASE("cyclic 2-groups form one block with rank-one prj lattice") {
  for (int n = 1; n <= 3; ++n) {
    auto t = cyclic_table(1UL << n);
    auto blocks = partition_blocks(t, *ctx_of(t));
    REQUIRE(blocks.size() == 1);
    CHECK(blocks[0]->defect == n);
    CHECK(blocks[0]->l() == 1);
    // generator is the all-ones vector
    IntMat want(0, 0);
    want.append_row(std::vector<mpz_class>(1UL << n, 1));
    CHECK(same_lattice(blocks[0]->prj_basis, want));
  }
}

TEST_CASE("product blocks C_{2^n} x A4 match k = 2^{n+2}, l = 3") {
  for (int n = 1; n <= 3; ++n) {
    auto t = model_table(n, ModelFamily::A4);
    auto blocks = partition_blocks(t, *ctx_of(t));
    REQUIRE(blocks.size() == 1);
    CHECK(blocks[0]->k() == (1 << (n + 2)));
    CHECK(blocks[0]->l() == 3);
    CHECK(blocks[0]->defect == n + 2);
    // prj generators (sum theta_i) x (chi_j + chi_4)
    IntMat want(0, 0);
    int kc = 1 << n;
    for (int j = 0; j < 3; ++j) {
      std::vector<mpz_class> row(4UL * kc);
      for (int i = 0; i < kc; ++i) {
        row[i * 4 + j] = 1;
        row[i * 4 + 3] = 1;
      }
      want.append_row(row);
    }
    CHECK(same_lattice(blocks[0]->prj_basis, want));
  }
}

TEST_CASE("principal blocks of C_{2^n} x A5") {
  for (int n = 1; n <= 2; ++n) {
    auto t = model_table(n, ModelFamily::A5);
    auto blocks = partition_blocks(t, *ctx_of(t));
    REQUIRE(blocks.size() == 2);
    const Block &b0 = *blocks[0];
    CHECK(b0.k() == (1 << (n + 2)));
    CHECK(b0.l() == 3);
    CHECK(b0.defect == n + 2);
    const Block &b1 = *blocks[1];
    CHECK(b1.k() == (1 << n));
    CHECK(b1.l() == 1);
    CHECK(b1.defect == n);
  }
}

TEST_CASE("partition is independent of the prime choice when g = 2") {
  // conductor 15 arises for A4/A5 comparisons; exercise it on the A5 table
  auto t = a5_table();
  auto c0 = std::make_shared<const PrimeContext>(15, 0);
  auto c1 = std::make_shared<const PrimeContext>(15, 1);
  auto b0 = partition_blocks(t, *c0);
  auto b1 = partition_blocks(t, *c1);
  REQUIRE(b0.size() == b1.size());
  for (size_t i = 0; i < b0.size(); ++i)
    CHECK(b0[i]->char_indices == b1[i]->char_indices);
}

TEST_CASE("prj basis rows vanish on 2-singular classes") {
  auto t = model_table(2, ModelFamily::A4);
  auto blocks = partition_blocks(t, *ctx_of(t));
  const Block &b = *blocks[0];
  for (int r = 0; r < b.prj_basis.rows(); ++r) {
    std::vector<CycNum> coeffs(b.k());
    for (int i = 0; i < b.k(); ++i)
      coeffs[i] = CycNum::integer(b.prj_basis.at(r, i).get_si());
    // expand to the full table coefficient vector
    std::vector<CycNum> full(t->num_chars());
    for (int i = 0; i < b.k(); ++i) full[b.char_indices[i]] = coeffs[i];
    auto vals = class_function_values(*t, full);
    for (int j = 0; j < t->num_classes(); ++j)
      if (!t->classes[j].is_2regular) CHECK(vals[j].is_zero());
  }
}

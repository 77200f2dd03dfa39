#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "perfiso/isometry.hpp"

using namespace perfiso;

static CtxPtr ctx_of(const TablePtr &t, int factor = 0) {
  return std::make_shared<const PrimeContext>(context_conductor(*t), factor);
}

static BlockPtr principal(const TablePtr &t, const CtxPtr &ctx) {
  return partition_blocks(t, *ctx)[0];
}

TEST_CASE("cf lattice of O C2") {
  auto t = cyclic_table(2);
  auto ctx = ctx_of(t);
  auto b = principal(t, ctx);
  DvrLattice cf = cf_lattice(*b, ctx, false);
  CHECK(cf.rank() == 2);
  auto half = CycNum::rational(mpq_class(1, 2));
  CHECK(cf.contains({half, -half}));
  CHECK(!cf.contains({half, CycNum()}));
  DvrLattice cfp = cf_lattice(*b, ctx, true);
  CHECK(cfp.rank() == 1);
  CHECK(cfp.contains({half, half}));
  CHECK(!cfp.contains({half, -half}));
}

TEST_CASE("cf lattice of O A4 matches the divisibility description") {
  auto t = a4_table();
  auto ctx = ctx_of(t);
  auto b = principal(t, ctx);
  DvrLattice cf = cf_lattice(*b, ctx, false);
  auto q = [](long n, long d) { return CycNum::rational(mpq_class(n, d)); };
  // (1/4)(chi1+chi2+chi3-chi4) is the class indicator of (12)(34); member
  CHECK(cf.contains({q(1, 4), q(1, 4), q(1, 4), q(-1, 4)}));
  // (1/12)(chi1+chi2+chi3-9chi4) is a member
  CHECK(cf.contains({q(1, 12), q(1, 12), q(1, 12), q(-9, 12)}));
  // the +9 variant is not: its value at the identity is 30/12
  CHECK(!cf.contains({q(1, 12), q(1, 12), q(1, 12), q(9, 12)}));
  CHECK(!cf.contains({q(1, 4), q(1, 4), q(1, 4), q(9, 4)}));
  // unit vectors and the quarter lattice bound
  CHECK(cf.contains({CycNum::integer(1), CycNum(), CycNum(), CycNum()}));
  CHECK(!cf.contains({q(1, 8), CycNum(), CycNum(), CycNum()}));
  // membership agrees with the closed-form description:
  // 4a_j integral and a_1 = a_2 = a_3 = -a_4 mod O
  std::mt19937 rng(2024);
  PrimeContext &pc = const_cast<PrimeContext &>(*ctx);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<CycNum> a(4);
    std::vector<mpq_class> raw(4);
    for (auto &x : raw) {
      x = mpq_class(long(rng() % 13) - 6, 1 + long(rng() % 8));
      x.canonicalize();
    }
    for (int i = 0; i < 4; ++i) a[i] = CycNum::rational(raw[i]);
    bool closed_form = true;
    long delta[4] = {1, 1, 1, -1};
    for (int i = 0; i < 4; ++i)
      if (!pc.in_scaled_ring(CycNum::integer(4) * a[i], 0)) closed_form = false;
    for (int i = 0; i < 4 && closed_form; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (!pc.in_scaled_ring(CycNum::integer(delta[i]) * a[i] -
                                   CycNum::integer(delta[j]) * a[j],
                               0))
          closed_form = false;
    CHECK(cf.contains(a) == closed_form);
  }
}

TEST_CASE("lattice checker on O C2") {
  auto t = cyclic_table(2);
  auto ctx = ctx_of(t);
  auto b = principal(t, ctx);
  CHECK(is_perfect_lattice(identity_isometry(b), ctx).verdict);
  // global negation
  SignedBijection neg(b, b, {0, 1}, {-1, -1});
  CHECK(is_perfect_lattice(neg, ctx).verdict);
  // theta1 -> -theta1 fails (and fails in the p' part)
  SignedBijection half_flip(b, b, {0, 1}, {1, -1});
  auto rep = is_perfect_lattice(half_flip, ctx);
  CHECK(!rep.verdict);
  bool pprime_witness = false;
  for (const auto &w : rep.failures)
    if (w.checker == "cf_pprime") pprime_witness = true;
  CHECK(pprime_witness);
  // mu agrees
  CHECK(is_perfect_mu(identity_isometry(b), ctx).verdict);
  CHECK(is_perfect_mu(neg, ctx).verdict);
  CHECK(!is_perfect_mu(half_flip, ctx).verdict);
}

TEST_CASE("mu matrix values on small blocks") {
  auto t2 = cyclic_table(2);
  auto ctx2 = ctx_of(t2);
  auto b2 = principal(t2, ctx2);
  auto mu2 = mu_matrix(identity_isometry(b2));
  CHECK(mu2[0][0] == CycNum::integer(2));
  CHECK(mu2[0][1] == CycNum());
  CHECK(mu2[1][1] == CycNum::integer(2));

  auto t = a4_table();
  auto ctx = ctx_of(t);
  auto b = principal(t, ctx);
  auto mu = mu_matrix(identity_isometry(b));
  CHECK(mu[0][0] == CycNum::integer(12));
  CHECK(mu[2][1] == CycNum());
}

TEST_CASE("A4 paper family members are perfect, sign deviations are not") {
  auto t = a4_table();
  auto ctx = ctx_of(t);
  auto b = principal(t, ctx);
  // chi1 <-> chi2 swap, all signs +
  SignedBijection swap12(b, b, {1, 0, 2, 3}, {1, 1, 1, 1});
  CHECK(is_perfect_lattice(swap12, ctx).verdict);
  CHECK(is_perfect_mu(swap12, ctx).verdict);
  // fixing all characters but negating chi4 is not perfect
  SignedBijection bad(b, b, {0, 1, 2, 3}, {1, 1, 1, -1});
  CHECK(!is_perfect_lattice(bad, ctx).verdict);
  CHECK(!is_perfect_mu(bad, ctx).verdict);
  // chi1 -> -chi4, chi4 -> -chi1 (sigma = (14), eps = +1)
  SignedBijection s14(b, b, {3, 1, 2, 0}, {-1, 1, 1, -1});
  CHECK(is_perfect_lattice(s14, ctx).verdict);
  CHECK(is_perfect_mu(s14, ctx).verdict);
}

TEST_CASE("checker agreement on random signed bijections") {
  struct PairSpec {
    TablePtr ts, tt;
  };
  std::vector<PairSpec> pairs = {{a4_table(), a4_table()},
                                 {cyclic_table(4), cyclic_table(4)},
                                 {a4_table(), a5_table()}};
  std::mt19937_64 rng(0x5eed);
  for (const auto &ps : pairs) {
    unsigned long m = context_conductor(*ps.ts);
    unsigned long mt = context_conductor(*ps.tt);
    unsigned long lcm = m / gcd_ul(m, mt) * mt;
    auto ctx = std::make_shared<const PrimeContext>(lcm, 0);
    auto bs = principal(ps.ts, ctx);
    auto bt = principal(ps.tt, ctx);
    if (bs->k() != bt->k()) continue;
    IsoChecker chk(bs, bt, ctx);
    int k = bs->k();
    for (int trial = 0; trial < 120; ++trial) {
      std::vector<int> perm(k), signs(k);
      for (int i = 0; i < k; ++i) perm[i] = i;
      for (int i = k - 1; i > 0; --i)
        std::swap(perm[i], perm[rng() % (i + 1)]);
      for (int i = 0; i < k; ++i) signs[i] = (rng() & 1) ? 1 : -1;
      SignedBijection iso(bs, bt, perm, signs);
      CHECK(chk.lattice_check(iso).verdict == chk.mu_check(iso).verdict);
    }
  }
}

TEST_CASE("compose, invert, tensor") {
  auto t = a4_table();
  auto ctx = ctx_of(t);
  auto b = principal(t, ctx);
  SignedBijection s14(b, b, {3, 1, 2, 0}, {-1, 1, 1, -1});
  auto id = identity_isometry(b);
  CHECK(compose(s14, invert(s14)).key() == id.key());
  auto c4 = cyclic_table(4);
  auto bc = principal(c4, ctx_of(c4));
  auto idc = identity_isometry(bc);
  auto tens = tensor(idc, id);
  CHECK(tens.key() == identity_isometry(tens.source).key());
  // theta_i x chi_m -> theta_{i+1} x chi_m
  SignedBijection shift(bc, bc, {1, 2, 3, 0}, {1, 1, 1, 1});
  auto ts = tensor(shift, id);
  for (int i = 0; i < 4; ++i)
    for (int m = 0; m < 4; ++m)
      CHECK(ts.perm[i * 4 + m] == ((i + 1) % 4) * 4 + m);
}

TEST_CASE("central iso check") {
  auto t = a4_table();
  auto ctx = ctx_of(t);
  auto b = principal(t, ctx);
  CHECK(central_iso_check(identity_isometry(b), ctx).verdict);
  SignedBijection swap12(b, b, {1, 0, 2, 3}, {1, 1, 1, 1});
  CHECK(central_iso_check(swap12, ctx).verdict);

  auto c8 = cyclic_table(8);
  auto ctx8 = ctx_of(c8);
  auto bc = principal(c8, ctx8);
  // I_{1,l,1}: theta_i -> theta_{i+l} is induced by an algebra automorphism
  std::vector<int> perm(8), signs(8, 1);
  for (int i = 0; i < 8; ++i) perm[i] = (i + 3) % 8;
  CHECK(central_iso_check(SignedBijection(bc, bc, perm, signs), ctx8).verdict);
}

TEST_CASE("prj prefilter matches full lattice equality") {
  auto t = a4_table();
  auto ctx = ctx_of(t);
  auto b = principal(t, ctx);
  IsoChecker chk(b, b, ctx);
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<int> perm(4), signs(4);
    for (int i = 0; i < 4; ++i) perm[i] = i;
    for (int i = 3; i > 0; --i) std::swap(perm[i], perm[rng() % (i + 1)]);
    for (int i = 0; i < 4; ++i) signs[i] = (rng() & 1) ? 1 : -1;
    // reference: push basis rows and compare lattices over Z
    IntMat img(0, 0);
    for (int r = 0; r < b->prj_basis.rows(); ++r) {
      std::vector<mpz_class> row(4);
      for (int i = 0; i < 4; ++i) row[perm[i]] = signs[i] * b->prj_basis.at(r, i);
      img.append_row(row);
    }
    CHECK(chk.prj_preserved(perm, signs) ==
          same_lattice(img, b->prj_basis));
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include "perfiso/blocks.hpp"
#include "perfiso/chartab.hpp"

using namespace perfiso;

static std::vector<CycNum> unit_coeffs(int k, int a) {
  std::vector<CycNum> v(k);
  v[a] = CycNum::integer(1);
  return v;
}

TEST_CASE("cyclic tables") {
  auto t1 = cyclic_table(1);
  CHECK(t1->num_chars() == 1);
  CHECK(t1->values[0][0] == CycNum::integer(1));
  auto t2 = cyclic_table(2);
  CHECK(t2->values[1][1] == CycNum::integer(-1));
  auto t4 = cyclic_table(4);
  CHECK(t4->values[1][1] == CycNum::root_of_unity(4, 1));
  CHECK(t4->values[1][2] == CycNum::integer(-1));
}

TEST_CASE("a4 table matches the fixed values") {
  auto t = a4_table();
  CycNum w = CycNum::root_of_unity(3, 1), w2 = CycNum::root_of_unity(3, 2);
  CHECK(t->values[3] ==
        std::vector<CycNum>{CycNum::integer(3), CycNum::integer(-1), CycNum(),
                            CycNum()});
  CHECK(t->values[1][3] == w2);
  CHECK(t->values[2][3] == w);
  CHECK(inner_product(*t, unit_coeffs(4, 3), unit_coeffs(4, 3)) ==
        CycNum::integer(1));
  CHECK(inner_product(*t, unit_coeffs(4, 0), unit_coeffs(4, 3)) == CycNum());
  // bilinearity example
  std::vector<CycNum> s = unit_coeffs(4, 0);
  s[3] = CycNum::integer(1);
  CHECK(inner_product(*t, s, unit_coeffs(4, 3)) == CycNum::integer(1));
}

TEST_CASE("a5 table") {
  auto t = a5_table();
  t->validate(); // orthogonality both ways
  CHECK(t->degree(3) == 4);
  CHECK(t->values[3][1] == CycNum());          // degree 4 at (12)(34)
  CHECK(t->values[4][2] == CycNum::integer(-1)); // degree 5 at (123)
  // degree-3 values are the golden conjugates summing to 1
  CHECK(t->values[1][3] + t->values[2][3] == CycNum::integer(1));
  CHECK(t->values[1][3] * t->values[2][3] == CycNum::integer(-1));
}

TEST_CASE("product tables") {
  auto c2 = cyclic_table(2);
  auto v4 = product_table(c2, c2);
  CHECK(v4->num_chars() == 4);
  for (const auto &row : v4->values)
    for (const auto &v : row)
      CHECK((v == CycNum::integer(1) || v == CycNum::integer(-1)));
  v4->validate();

  auto p = product_table(cyclic_table(4), a4_table());
  CHECK(p->num_chars() == 16);
  CHECK(p->group_order == 48);
  p->validate();
  // (theta_1 x chi_4) at (x, (12)(34))
  int chi = 1 * 4 + 3, cls = 1 * 4 + 1;
  CHECK(p->values[chi][cls] ==
        CycNum::root_of_unity(4, 1) * CycNum::integer(-1));
  // sum of squared degrees
  mpz_class s = 0;
  for (int a = 0; a < p->num_chars(); ++a) s += p->degree(a) * p->degree(a);
  CHECK(s == 48);
}

TEST_CASE("table json round trip is bit exact") {
  auto p = product_table(cyclic_table(2), a4_table());
  auto j = p->to_json();
  CharTable q = CharTable::from_json(j);
  CHECK(q.to_json().dump() == j.dump());
  q.validate();
}

TEST_CASE("index2 embeddings") {
  Embedding e1 = index2_embedding(1, ModelFamily::A4);
  CHECK(e1.index == 2);
  CHECK(e1.sub->group_label == "A4");
  CHECK(e1.class_map[0] == 0);

  Embedding e2 = index2_embedding(2, ModelFamily::A4);
  // N-class of (x^2 in C2 ~ x^2 in C4, (123)) maps to the same representative
  // sub class (1, (123)) = index 1*4+2; sup class (x^2,(123)) = 2*4+2
  CHECK(e2.class_map[1 * 4 + 2] == 2 * 4 + 2);
  CHECK(e2.sup->group_order / e2.sub->group_order == 2);

  Embedding e0 = index2_embedding(1, ModelFamily::Trivial);
  CHECK(e0.class_map == std::vector<int>{0});
}

TEST_CASE("restriction of characters") {
  // restriction of theta_1 x chi_4 from C2xA4 to A4 is chi_4
  Embedding e = index2_embedding(1, ModelFamily::A4);
  auto r = restrict_character(e, 1 * 4 + 3);
  CHECK(r == std::vector<mpz_class>{0, 0, 0, 1});
  // the two extensions of any irreducible restrict equally
  for (int m = 0; m < 4; ++m)
    CHECK(restrict_character(e, 0 * 4 + m) == restrict_character(e, 1 * 4 + m));
  // all restrictions from C4xA4 to C2xA4 are single irreducibles
  Embedding e2 = index2_embedding(2, ModelFamily::A4);
  for (int chi = 0; chi < 16; ++chi) {
    auto coeffs = restrict_character(e2, chi);
    mpz_class total = 0;
    int nonzero = 0;
    for (const auto &c : coeffs) {
      total += c;
      if (c != 0) ++nonzero;
    }
    CHECK(total == 1);
    CHECK(nonzero == 1);
  }
}

TEST_CASE("restriction handles reducible cases exactly") {
  // diagonal A4 inside A4 x A4: chi4 x chi4 restricts to chi1+chi2+chi3+2chi4
  auto a4 = a4_table();
  Embedding diag;
  diag.sub = a4;
  diag.sup = product_table(a4, a4);
  diag.index = 12;
  diag.class_map = {0 * 4 + 0, 1 * 4 + 1, 2 * 4 + 2, 3 * 4 + 3};
  diag.validate();
  auto r = restrict_character(diag, 3 * 4 + 3);
  CHECK(r == std::vector<mpz_class>{1, 1, 1, 2});
}

TEST_CASE("embedding fiber compatibility") {
  for (auto fam : {ModelFamily::A4, ModelFamily::A5}) {
    for (int n = 1; n <= 2; ++n) {
      Embedding e = index2_embedding(n, fam);
      // restriction value compatibility: chi at the sup class equals the
      // restricted class function at each sub class in the fiber
      for (int chi = 0; chi < e.sup->num_chars(); ++chi) {
        auto coeffs = restrict_character(e, chi);
        for (int c = 0; c < e.sub->num_classes(); ++c) {
          CycNum v;
          for (int a = 0; a < e.sub->num_chars(); ++a)
            if (coeffs[a] != 0)
              v += CycNum::integer(coeffs[a].get_si()) * e.sub->values[a][c];
          CHECK(v == e.sup->values[chi][e.class_map[c]]);
        }
      }
    }
  }
}

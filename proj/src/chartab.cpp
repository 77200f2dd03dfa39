#include "perfiso/chartab.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

#include <nlohmann/json.hpp>

namespace perfiso {

using json = nlohmann::json;

namespace {

unsigned long lcm_ul2(unsigned long a, unsigned long b) {
  return a / gcd_ul(a, b) * b;
}

void lift_all_values(CharTable &t) {
  unsigned long M = 1;
  for (const auto &row : t.values)
    for (const auto &v : row) M = lcm_ul2(M, v.conductor());
  t.conductor = M;
  for (auto &row : t.values)
    for (auto &v : row) v = v.lifted_to(M);
}

} // namespace

mpz_class CharTable::degree(int chi) const {
  const CycNum &d = values[chi][0];
  if (!d.is_rational() || d.rational_value().get_den() != 1)
    throw std::logic_error("non-integral character degree");
  return d.rational_value().get_num();
}

void CharTable::validate() const {
  int k = num_chars(), c = num_classes();
  if (k != c) throw std::logic_error("table not square");
  unsigned long class_sum = 0;
  mpz_class deg_sq_sum = 0;
  for (int j = 0; j < c; ++j) {
    if (classes[j].size * classes[j].centralizer_order != group_order)
      throw std::logic_error("class equation: size * centralizer != order");
    if (classes[j].is_2regular != (classes[j].element_order % 2 == 1))
      throw std::logic_error("2-regular flag inconsistent");
    class_sum += classes[j].size;
  }
  if (class_sum != group_order) throw std::logic_error("class sizes");
  for (int a = 0; a < k; ++a) {
    mpz_class d = degree(a);
    if (d <= 0) throw std::logic_error("non-positive degree");
    deg_sq_sum += d * d;
  }
  if (deg_sq_sum != mpz_class(group_order))
    throw std::logic_error("sum of squared degrees");
  // row orthogonality
  for (int a = 0; a < k; ++a)
    for (int b = a; b < k; ++b) {
      CycNum s;
      for (int j = 0; j < c; ++j)
        s += CycNum::integer(long(classes[j].size)) * values[a][j] *
             values[b][j].conjugate();
      CycNum want = CycNum::integer(a == b ? long(group_order) : 0);
      if (s != want) throw std::logic_error("row orthogonality");
    }
  // column orthogonality
  for (int i = 0; i < c; ++i)
    for (int j = i; j < c; ++j) {
      CycNum s;
      for (int a = 0; a < k; ++a) s += values[a][i] * values[a][j].conjugate();
      CycNum want = CycNum::integer(
          i == j ? long(classes[i].centralizer_order) : 0);
      if (s != want) throw std::logic_error("column orthogonality");
    }
}

int CharTable::index_of_value_row(const std::vector<CycNum> &row) const {
  for (int a = 0; a < num_chars(); ++a)
    if (values[a] == row) return a;
  return -1;
}

json CharTable::to_json() const {
  json cls = json::array();
  for (const auto &cd : classes)
    cls.push_back(json{{"label", cd.label},
                       {"size", cd.size},
                       {"order", cd.element_order},
                       {"centralizer", cd.centralizer_order},
                       {"regular2", cd.is_2regular}});
  json chars = json::array();
  for (const auto &row : values) {
    json r = json::array();
    for (const auto &v : row) r.push_back(v.to_json());
    chars.push_back(r);
  }
  return json{{"group", group_label}, {"order", group_order},
              {"exponent", exponent}, {"conductor", conductor},
              {"classes", cls},       {"chars", chars}};
}

CharTable CharTable::from_json(const json &j) {
  CharTable t;
  t.group_label = j.at("group").get<std::string>();
  t.group_order = j.at("order").get<unsigned long>();
  t.exponent = j.value("exponent", t.group_order);
  for (const auto &cj : j.at("classes")) {
    ClassData cd;
    cd.label = cj.at("label").get<std::string>();
    cd.size = cj.at("size").get<unsigned long>();
    cd.element_order = cj.at("order").get<unsigned long>();
    cd.centralizer_order = cj.at("centralizer").get<unsigned long>();
    cd.is_2regular = cj.at("regular2").get<bool>();
    t.classes.push_back(cd);
  }
  for (const auto &rj : j.at("chars")) {
    std::vector<CycNum> row;
    for (const auto &vj : rj) row.push_back(CycNum::from_json(vj));
    t.values.push_back(std::move(row));
  }
  lift_all_values(t);
  return t;
}

TablePtr cyclic_table(unsigned long m) {
  if (m < 1) throw std::invalid_argument("cyclic_table: m < 1");
  auto t = std::make_shared<CharTable>();
  t->group_label = "C" + std::to_string(m);
  t->group_order = m;
  t->exponent = m;
  for (unsigned long j = 0; j < m; ++j) {
    ClassData cd;
    cd.label = "x^" + std::to_string(j);
    cd.size = 1;
    cd.element_order = m / gcd_ul(m, j);
    cd.centralizer_order = m;
    cd.is_2regular = (cd.element_order % 2 == 1);
    t->classes.push_back(cd);
  }
  t->values.assign(m, std::vector<CycNum>(m));
  for (unsigned long i = 0; i < m; ++i)
    for (unsigned long j = 0; j < m; ++j)
      t->values[i][j] = CycNum::root_of_unity(m, long(i * j % m));
  lift_all_values(*t);
  t->validate();
  return t;
}

TablePtr a4_table() {
  auto t = std::make_shared<CharTable>();
  t->group_label = "A4";
  t->group_order = 12;
  t->exponent = 6;
  t->classes = {{"()", 1, 1, 12, true},
                {"(12)(34)", 3, 2, 4, false},
                {"(123)", 4, 3, 3, true},
                {"(132)", 4, 3, 3, true}};
  CycNum one = CycNum::integer(1), w = CycNum::root_of_unity(3, 1),
         w2 = CycNum::root_of_unity(3, 2);
  t->values = {
      {one, one, one, one},
      {one, one, w, w2},
      {one, one, w2, w},
      {CycNum::integer(3), CycNum::integer(-1), CycNum(), CycNum()}};
  lift_all_values(*t);
  t->validate();
  return t;
}

TablePtr a5_table() {
  auto t = std::make_shared<CharTable>();
  t->group_label = "A5";
  t->group_order = 60;
  t->exponent = 30;
  t->classes = {{"()", 1, 1, 60, true},
                {"(12)(34)", 15, 2, 4, false},
                {"(123)", 20, 3, 3, true},
                {"(12345)", 12, 5, 5, true},
                {"(13524)", 12, 5, 5, true}};
  // golden ratio values: (1 +- sqrt 5)/2 as -(z5^2 + z5^3) and -(z5 + z5^4)
  CycNum z5 = CycNum::root_of_unity(5, 1);
  CycNum gp = -(z5 * z5 + z5 * z5 * z5);
  CycNum gm = -(z5 + z5 * z5 * z5 * z5);
  CycNum one = CycNum::integer(1), zero;
  t->values = {
      {one, one, one, one, one},
      {CycNum::integer(3), CycNum::integer(-1), zero, gp, gm},
      {CycNum::integer(3), CycNum::integer(-1), zero, gm, gp},
      {CycNum::integer(4), zero, one, CycNum::integer(-1),
       CycNum::integer(-1)},
      {CycNum::integer(5), one, CycNum::integer(-1), zero, zero}};
  lift_all_values(*t);
  t->validate();
  return t;
}

TablePtr product_table(const TablePtr &t1, const TablePtr &t2) {
  auto t = std::make_shared<CharTable>();
  t->group_label = t1->group_label + "x" + t2->group_label;
  t->group_order = t1->group_order * t2->group_order;
  t->exponent = lcm_ul2(t1->exponent, t2->exponent);
  int c1 = t1->num_classes(), c2 = t2->num_classes();
  for (int i = 0; i < c1; ++i)
    for (int j = 0; j < c2; ++j) {
      ClassData cd;
      cd.label = "(" + t1->classes[i].label + "," + t2->classes[j].label + ")";
      cd.size = t1->classes[i].size * t2->classes[j].size;
      cd.element_order =
          lcm_ul2(t1->classes[i].element_order, t2->classes[j].element_order);
      cd.centralizer_order =
          t1->classes[i].centralizer_order * t2->classes[j].centralizer_order;
      cd.is_2regular = (cd.element_order % 2 == 1);
      t->classes.push_back(cd);
    }
  int k1 = t1->num_chars(), k2 = t2->num_chars();
  t->values.assign(size_t(k1) * k2, {});
  for (int a = 0; a < k1; ++a)
    for (int b = 0; b < k2; ++b) {
      std::vector<CycNum> row;
      row.reserve(size_t(c1) * c2);
      for (int i = 0; i < c1; ++i)
        for (int j = 0; j < c2; ++j)
          row.push_back(t1->values[a][i] * t2->values[b][j]);
      t->values[size_t(a) * k2 + b] = std::move(row);
    }
  lift_all_values(*t);
  return t;
}

std::vector<CycNum> class_function_values(const CharTable &t,
                                          const std::vector<CycNum> &coeffs) {
  assert(int(coeffs.size()) == t.num_chars());
  std::vector<CycNum> vals(t.num_classes());
  for (int a = 0; a < t.num_chars(); ++a) {
    if (coeffs[a].is_zero()) continue;
    for (int j = 0; j < t.num_classes(); ++j)
      vals[j] += coeffs[a] * t.values[a][j];
  }
  return vals;
}

CycNum inner_product(const CharTable &t, const std::vector<CycNum> &phi,
                     const std::vector<CycNum> &psi) {
  std::vector<CycNum> pv = class_function_values(t, phi);
  std::vector<CycNum> qv = class_function_values(t, psi);
  CycNum s;
  for (int j = 0; j < t.num_classes(); ++j)
    s += CycNum::integer(long(t.classes[j].size)) * pv[j] * qv[j].conjugate();
  return s * CycNum::rational(mpq_class(1, long(t.group_order)));
}

TablePtr model_table(int n, ModelFamily h) {
  if (n < 0) throw std::invalid_argument("model_table: n < 0");
  unsigned long m = 1UL << n;
  switch (h) {
    case ModelFamily::Trivial:
      return cyclic_table(m);
    case ModelFamily::A4:
      return n == 0 ? a4_table() : product_table(cyclic_table(m), a4_table());
    case ModelFamily::A5:
      return n == 0 ? a5_table() : product_table(cyclic_table(m), a5_table());
  }
  throw std::logic_error("unreachable");
}

void Embedding::validate() const {
  if (sub->group_order * index != sup->group_order)
    throw std::logic_error("embedding: index mismatch");
  if (int(class_map.size()) != sub->num_classes())
    throw std::logic_error("embedding: class map size");
  // class_map preserves element orders; fibers carry consistent sizes
  std::vector<unsigned long> fiber_size(sup->num_classes(), 0);
  for (int c = 0; c < sub->num_classes(); ++c) {
    int g = class_map[c];
    if (sub->classes[c].element_order != sup->classes[g].element_order)
      throw std::logic_error("embedding: element order not preserved");
    fiber_size[g] += sub->classes[c].size;
  }
  // |N ∩ C| * [G:N] >= |C| whenever the class meets N
  for (int g = 0; g < sup->num_classes(); ++g)
    if (fiber_size[g] != 0 &&
        fiber_size[g] * index < sup->classes[g].size)
      throw std::logic_error("embedding: fiber sizes inconsistent");
}

Embedding index2_embedding(int n, ModelFamily h) {
  if (n < 1) throw std::invalid_argument("index2_embedding: n < 1");
  Embedding e;
  e.sup = model_table(n, h);
  e.sub = model_table(n - 1, h);
  e.index = 2;
  unsigned long m_sup = 1UL << n;
  int ch = (h == ModelFamily::Trivial) ? 1
           : (h == ModelFamily::A4)    ? 4
                                       : 5;
  int sub_cyc = int(e.sub->group_order) / (h == ModelFamily::Trivial ? 1
                                           : h == ModelFamily::A4    ? 12
                                                                     : 60);
  (void)sub_cyc;
  int c_sub = e.sub->num_classes();
  e.class_map.resize(c_sub);
  if (h == ModelFamily::Trivial) {
    for (int j = 0; j < c_sub; ++j) e.class_map[j] = int((2UL * j) % m_sup);
  } else if (n == 1) {
    // sub is the bare H table; class h maps to (x^0, h)
    for (int j = 0; j < c_sub; ++j) e.class_map[j] = j;
  } else {
    unsigned long m_sub = 1UL << (n - 1);
    for (int j = 0; j < c_sub; ++j) {
      int cyc = j / ch, rest = j % ch;
      e.class_map[j] = int(((2UL * cyc) % m_sup) * ch + rest);
    }
    (void)m_sub;
  }
  e.validate();
  return e;
}

std::vector<mpz_class> restrict_character(const Embedding &e, int chi) {
  const CharTable &sub = *e.sub;
  // restricted values as a class function on the subgroup
  std::vector<CycNum> vals(sub.num_classes());
  for (int c = 0; c < sub.num_classes(); ++c)
    vals[c] = e.sup->values[chi][e.class_map[c]];
  std::vector<mpz_class> coeffs(sub.num_chars());
  for (int a = 0; a < sub.num_chars(); ++a) {
    CycNum s;
    for (int c = 0; c < sub.num_classes(); ++c)
      s += CycNum::integer(long(sub.classes[c].size)) * vals[c] *
           sub.values[a][c].conjugate();
    s = s * CycNum::rational(mpq_class(1, long(sub.group_order)));
    if (!s.is_rational())
      throw std::logic_error("restriction multiplicity not rational");
    mpq_class q = s.rational_value();
    if (q.get_den() != 1 || q < 0)
      throw std::logic_error("restriction multiplicity not a non-negative integer");
    coeffs[a] = q.get_num();
  }
  return coeffs;
}

} // namespace perfiso

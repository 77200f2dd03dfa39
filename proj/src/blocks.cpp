#include "perfiso/blocks.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <numeric>

#include <nlohmann/json.hpp>

namespace perfiso {

using json = nlohmann::json;

json Block::to_json() const {
  json prj = json::array();
  for (int i = 0; i < prj_basis.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < prj_basis.cols(); ++j)
      row.push_back((int64_t)prj_basis.at(i, j).get_si());
    prj.push_back(row);
  }
  return json{{"chars", char_indices},
              {"k", k()},
              {"l", l()},
              {"defect", defect},
              {"prj_basis", prj}};
}

CycNum central_character(const CharTable &t, int chi, int cls) {
  CycNum v = t.values[chi][cls] * CycNum::integer(long(t.classes[cls].size));
  return v * CycNum::rational(mpq_class(mpz_class(1), t.degree(chi)));
}

unsigned long context_conductor(const CharTable &t) {
  unsigned long M = t.exponent;
  if (M % 4 == 2) M /= 2;
  return M;
}

namespace {

long v2_ul(unsigned long n) {
  long v = 0;
  while (n % 2 == 0) {
    n /= 2;
    ++v;
  }
  return v;
}

IntMat prj_lattice_of(const CharTable &t, const std::vector<int> &chars) {
  // kernel over Z of evaluation at 2-singular classes, expanded to
  // power-basis coordinates (character values are algebraic integers, so the
  // coordinates are integral)
  std::vector<int> singular;
  for (int j = 0; j < t.num_classes(); ++j)
    if (!t.classes[j].is_2regular) singular.push_back(j);
  unsigned long dim = euler_phi(t.conductor);
  IntMat a(int(chars.size()), int(singular.size() * dim));
  for (size_t r = 0; r < chars.size(); ++r) {
    for (size_t s = 0; s < singular.size(); ++s) {
      const CycNum &v = t.values[chars[r]][singular[s]];
      for (unsigned long i = 0; i < dim; ++i) {
        const mpq_class &q = v.coeffs()[i];
        if (q.get_den() != 1)
          throw std::logic_error("character value not an algebraic integer");
        a.at(int(r), int(s * dim + i)) = q.get_num();
      }
    }
  }
  if (singular.empty()) return IntMat::identity(int(chars.size()));
  return left_kernel(a);
}

} // namespace

IntMat prj_lattice(const Block &b) {
  return prj_lattice_of(*b.table, b.char_indices);
}

std::vector<BlockPtr> partition_blocks(const TablePtr &t,
                                       const PrimeContext &ctx) {
  int k = t->num_chars();
  // cache central characters
  std::vector<std::vector<CycNum>> omega(
      k, std::vector<CycNum>(t->num_classes()));
  for (int a = 0; a < k; ++a)
    for (int j = 0; j < t->num_classes(); ++j)
      omega[a][j] = central_character(*t, a, j);

  // union-find over linkage
  std::vector<int> parent(k);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) {
      if (find(a) == find(b)) continue;
      bool linked = true;
      for (int j = 0; j < t->num_classes() && linked; ++j)
        if (!ctx.val_at_least(omega[a][j] - omega[b][j], 1)) linked = false;
      if (linked) parent[find(b)] = find(a);
    }

  std::vector<std::vector<int>> groups(k);
  for (int a = 0; a < k; ++a) groups[find(a)].push_back(a);

  long v2_order = v2_ul(t->group_order);
  std::vector<BlockPtr> blocks;
  for (int root = 0; root < k; ++root) {
    if (groups[root].empty()) continue;
    auto b = std::make_shared<Block>();
    b->table = t;
    b->char_indices = groups[root];
    long min_deg_v2 = -1;
    for (int chi : b->char_indices) {
      long v = v2_int(t->degree(chi));
      min_deg_v2 = (min_deg_v2 < 0) ? v : std::min(min_deg_v2, v);
    }
    b->defect = v2_order - min_deg_v2;
    b->prj_basis = prj_lattice_of(*t, b->char_indices);
    blocks.push_back(std::move(b));
  }
  std::sort(blocks.begin(), blocks.end(),
            [](const BlockPtr &x, const BlockPtr &y) {
              return x->char_indices[0] < y->char_indices[0];
            });
  return blocks;
}

BlockInvariants block_invariants(const Block &b) {
  return BlockInvariants{b.k(), b.l(), b.defect};
}

BlockPtr full_table_block(const TablePtr &t) {
  auto b = std::make_shared<Block>();
  b->table = t;
  b->char_indices.resize(t->num_chars());
  std::iota(b->char_indices.begin(), b->char_indices.end(), 0);
  long min_deg_v2 = -1;
  for (int chi : b->char_indices) {
    long v = v2_int(t->degree(chi));
    min_deg_v2 = (min_deg_v2 < 0) ? v : std::min(min_deg_v2, v);
  }
  b->defect = v2_ul(t->group_order) - min_deg_v2;
  b->prj_basis = prj_lattice_of(*t, b->char_indices);
  return b;
}

} // namespace perfiso

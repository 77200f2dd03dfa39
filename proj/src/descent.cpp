#include "perfiso/descent.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>

namespace perfiso {

CoveringData covering_fusion(const Embedding &e, const BlockPtr &sup_block,
                             const BlockPtr &sub_block) {
  CoveringData cd;
  cd.embedding = e;
  cd.sup_block = sup_block;
  cd.sub_block = sub_block;
  int ksub = sub_block->k();
  std::map<int, int> sub_pos; // char index in sub table -> block position
  for (int s = 0; s < ksub; ++s) sub_pos[sub_block->char_indices[s]] = s;

  std::vector<std::vector<int>> groups(ksub);
  cd.fiber_of.assign(sup_block->k(), -1);
  for (int p = 0; p < sup_block->k(); ++p) {
    auto coeffs = restrict_character(e, sup_block->char_indices[p]);
    int hit = -1;
    for (size_t a = 0; a < coeffs.size(); ++a) {
      if (coeffs[a] == 0) continue;
      if (coeffs[a] != 1 || hit >= 0)
        throw std::domain_error(
            "covering_fusion: restriction is not irreducible");
      hit = int(a);
    }
    if (hit < 0 || !sub_pos.count(hit))
      throw std::domain_error(
          "covering_fusion: restriction lands outside the covered block");
    int s = sub_pos[hit];
    groups[s].push_back(p);
    cd.fiber_of[p] = s;
  }
  for (int s = 0; s < ksub; ++s) {
    if (groups[s].size() != 2)
      throw std::domain_error("covering_fusion: fiber is not a pair");
    cd.fibers.push_back({groups[s][0], groups[s][1]});
  }
  return cd;
}

SignedBijection sgn_twist(const BlockPtr &sup_block, const Embedding &e) {
  const CharTable &t = *sup_block->table;
  std::vector<char> meets(t.num_classes(), 0);
  for (int c : e.class_map) meets[c] = 1;
  std::map<int, int> block_pos;
  for (int p = 0; p < sup_block->k(); ++p)
    block_pos[sup_block->char_indices[p]] = p;

  int k = sup_block->k();
  std::vector<int> perm(k), signs(k, 1);
  for (int p = 0; p < k; ++p) {
    std::vector<CycNum> row = t.values[sup_block->char_indices[p]];
    for (int c = 0; c < t.num_classes(); ++c)
      if (!meets[c]) row[c] = -row[c];
    int idx = t.index_of_value_row(row);
    if (idx < 0 || !block_pos.count(idx))
      throw std::logic_error("sgn twist left the block");
    perm[p] = block_pos[idx];
  }
  return SignedBijection(sup_block, sup_block, std::move(perm),
                         std::move(signs));
}

bool check_descent_hypothesis(const SignedBijection &iso,
                              const CoveringData &f, const CoveringData &fp) {
  assert(same_block(*iso.source, *f.sup_block));
  assert(same_block(*iso.target, *fp.sup_block));
  for (const auto &fiber : f.fibers) {
    int q1 = iso.perm[fiber[0]], q2 = iso.perm[fiber[1]];
    if (fp.fiber_of[q1] != fp.fiber_of[q2]) return false;
    if (iso.signs[fiber[0]] != iso.signs[fiber[1]]) return false;
  }
  return true;
}

namespace {

SignedBijection build_descended(const SignedBijection &iso,
                                const CoveringData &f,
                                const CoveringData &fp) {
  int ksub = f.sub_block->k();
  std::vector<int> perm(ksub), signs(ksub);
  for (int s = 0; s < ksub; ++s) {
    perm[s] = fp.fiber_of[iso.perm[f.fibers[s][0]]];
    signs[s] = iso.signs[f.fibers[s][0]];
  }
  return SignedBijection(f.sub_block, fp.sub_block, std::move(perm),
                         std::move(signs));
}

} // namespace

DescentResult descend(const SignedBijection &iso, const CoveringData &f,
                      const CoveringData &fp, CtxPtr ctx) {
  IsoChecker chk(f.sub_block, fp.sub_block, std::move(ctx),
                 IsoChecker::CF | IsoChecker::MU);
  return descend(iso, f, fp, chk);
}

DescentResult descend(const SignedBijection &iso, const CoveringData &f,
                      const CoveringData &fp, const IsoChecker &sub_checker) {
  DescentResult r;
  r.hypothesis_held = check_descent_hypothesis(iso, f, fp);
  if (!r.hypothesis_held) return r;
  r.descended = build_descended(iso, f, fp);
  r.lattice_report = sub_checker.lattice_check(*r.descended, true);
  r.mu_report = sub_checker.mu_check(*r.descended, true);
  return r;
}

bool verify_centre_restriction(const SignedBijection &iso,
                               const CoveringData &f, const CoveringData &fp,
                               CtxPtr ctx) {
  if (!check_descent_hypothesis(iso, f, fp)) return false;
  SignedBijection des = build_descended(iso, f, fp);
  // fiber-sum idempotents: iso must carry the fiber over chi exactly onto
  // the fiber over the descended image of chi
  for (int s = 0; s < f.sub_block->k(); ++s) {
    std::set<int> image = {iso.perm[f.fibers[s][0]], iso.perm[f.fibers[s][1]]};
    const auto &tf = fp.fibers[des.perm[s]];
    if (image != std::set<int>{tf[0], tf[1]}) return false;
  }
  return central_iso_check(des, std::move(ctx)).verdict;
}

} // namespace perfiso

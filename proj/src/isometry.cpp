#include "perfiso/isometry.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <mutex>

#include <nlohmann/json.hpp>

namespace perfiso {

using json = nlohmann::json;

SignedBijection::SignedBijection(BlockPtr src, BlockPtr tgt,
                                 std::vector<int> p, std::vector<int> s)
    : source(std::move(src)), target(std::move(tgt)), perm(std::move(p)),
      signs(std::move(s)) {
  int k = source->k();
  if (target->k() != k)
    throw std::invalid_argument("signed bijection: block sizes differ");
  if (int(perm.size()) != k || int(signs.size()) != k)
    throw std::invalid_argument("signed bijection: wrong length");
  std::vector<char> seen(k, 0);
  for (int i = 0; i < k; ++i) {
    if (perm[i] < 0 || perm[i] >= k || seen[perm[i]])
      throw std::invalid_argument("signed bijection: not a permutation");
    seen[perm[i]] = 1;
    if (signs[i] != 1 && signs[i] != -1)
      throw std::invalid_argument("signed bijection: sign not +-1");
  }
}

std::vector<int> SignedBijection::key() const {
  std::vector<int> k = perm;
  k.insert(k.end(), signs.begin(), signs.end());
  return k;
}

json SignedBijection::to_json() const {
  return json{{"perm", perm}, {"signs", signs}};
}

SignedBijection SignedBijection::from_json(BlockPtr src, BlockPtr tgt,
                                           const json &j) {
  return SignedBijection(std::move(src), std::move(tgt),
                         j.at("perm").get<std::vector<int>>(),
                         j.at("signs").get<std::vector<int>>());
}

bool same_block(const Block &a, const Block &b) {
  return a.table->group_label == b.table->group_label &&
         a.char_indices == b.char_indices;
}

json Witness::to_json() const {
  return json{{"checker", checker}, {"i", i}, {"j", j},
              {"condition", condition}};
}

json PerfectionReport::to_json() const {
  json f = json::array();
  for (const auto &w : failures) f.push_back(w.to_json());
  return json{{"perfect", verdict}, {"failures", f}};
}

// ---------------------------------------------------------------------------

IsoChecker::IsoChecker(BlockPtr b, BlockPtr c, CtxPtr ctx, int pieces)
    : b_(std::move(b)), c_(std::move(c)), ctx_(std::move(ctx)) {
  m_ = ctx_->conductor();
  const CharTable &tb = *b_->table, &tc = *c_->table;
  long e = ctx_->ram_e();

  if (pieces & CF) {
    cf_src_ = cf_lattice(*b_, ctx_, false);
    cf_tgt_ = same_block(*b_, *c_) ? cf_src_ : cf_lattice(*c_, ctx_, false);
    cfp_src_ = cf_lattice(*b_, ctx_, true);
    cfp_tgt_ = same_block(*b_, *c_) ? cfp_src_ : cf_lattice(*c_, ctx_, true);
  }
  if (pieces & MU) {
    val_src_.assign(b_->k(), {});
    for (int i = 0; i < b_->k(); ++i) {
      std::vector<CycNum> row(tb.num_classes());
      for (int g = 0; g < tb.num_classes(); ++g)
        row[g] = tb.values[b_->char_indices[i]][g].lifted_to(m_);
      val_src_[i] = std::move(row);
    }
    conj_tgt_.assign(c_->k(), {});
    for (int i = 0; i < c_->k(); ++i) {
      std::vector<CycNum> row(tc.num_classes());
      for (int h = 0; h < tc.num_classes(); ++h)
        row[h] = tc.values[c_->char_indices[i]][h].conjugate().lifted_to(m_);
      conj_tgt_[i] = std::move(row);
    }
    cent_v_src_.resize(tb.num_classes());
    reg_src_.resize(tb.num_classes());
    for (int g = 0; g < tb.num_classes(); ++g) {
      cent_v_src_[g] = e * v2_int(mpz_class(tb.classes[g].centralizer_order));
      reg_src_[g] = tb.classes[g].is_2regular;
    }
    cent_v_tgt_.resize(tc.num_classes());
    reg_tgt_.resize(tc.num_classes());
    for (int h = 0; h < tc.num_classes(); ++h) {
      cent_v_tgt_[h] = e * v2_int(mpz_class(tc.classes[h].centralizer_order));
      reg_tgt_[h] = tc.classes[h].is_2regular;
    }
  }
  if (pieces & CENTRAL) {
    central_src_ = central_character_lattice(*b_, ctx_);
    central_tgt_ = same_block(*b_, *c_) ? central_src_
                                        : central_character_lattice(*c_, ctx_);
    omega_src_.assign(tb.num_classes(), {});
    for (int g = 0; g < tb.num_classes(); ++g) {
      std::vector<CycNum> row(b_->k());
      for (int i = 0; i < b_->k(); ++i)
        row[i] = central_character(tb, b_->char_indices[i], g).lifted_to(m_);
      omega_src_[g] = std::move(row);
    }
    omega_tgt_.assign(tc.num_classes(), {});
    for (int h = 0; h < tc.num_classes(); ++h) {
      std::vector<CycNum> row(c_->k());
      for (int i = 0; i < c_->k(); ++i)
        row[i] = central_character(tc, c_->char_indices[i], h).lifted_to(m_);
      omega_tgt_[h] = std::move(row);
    }
  }
  if (pieces & PRJ) {
    prj_src_hnf_ = b_->prj_basis;
    prj_tgt_hnf_ = c_->prj_basis;
    // blocks with different l admit no perfect isometry at all
    prj_rank_mismatch_ = prj_src_hnf_.rows() != prj_tgt_hnf_.rows();
    prj_src_64_ = Lat64::from(prj_src_hnf_);
    prj_tgt_64_ = Lat64::from(prj_tgt_hnf_);
    if (!prj_src_64_ || !prj_tgt_64_) {
      prj_src_64_.reset();
      prj_tgt_64_.reset();
    }
    auto rows_of = [](const IntMat &m) {
      std::vector<std::vector<long>> rows;
      for (int i = 0; i < m.rows(); ++i) {
        std::vector<long> r(m.cols());
        for (int j = 0; j < m.cols(); ++j)
          r[j] = m.at(i, j).fits_slong_p() ? m.at(i, j).get_si() : 0;
        rows.push_back(std::move(r));
      }
      return rows;
    };
    if (prj_src_64_) {
      prj_src_rows_ = rows_of(prj_src_hnf_);
      prj_tgt_rows_ = rows_of(prj_tgt_hnf_);
    }
  }
  long v2_gb = v2_int(mpz_class(tb.group_order));
  long v2_gc = v2_int(mpz_class(tc.group_order));
  cod_src_.resize(b_->k());
  for (int i = 0; i < b_->k(); ++i)
    cod_src_[i] = v2_gb - v2_int(tb.degree(b_->char_indices[i]));
  cod_tgt_.resize(c_->k());
  for (int i = 0; i < c_->k(); ++i)
    cod_tgt_[i] = v2_gc - v2_int(tc.degree(c_->char_indices[i]));
}

namespace {

// image of a coefficient vector under the signed permutation
std::vector<CycNum> push_vector(const std::vector<CycNum> &v,
                                const std::vector<int> &perm,
                                const std::vector<int> &signs) {
  std::vector<CycNum> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    if (v[i].is_zero()) continue;
    out[perm[i]] = signs[i] == 1 ? v[i] : -v[i];
  }
  return out;
}

// preimage: a_i = sign_i * b_{perm(i)}
std::vector<CycNum> pull_vector(const std::vector<CycNum> &v,
                                const std::vector<int> &perm,
                                const std::vector<int> &signs) {
  std::vector<CycNum> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    const CycNum &x = v[perm[i]];
    if (x.is_zero()) continue;
    out[i] = signs[i] == 1 ? x : -x;
  }
  return out;
}

} // namespace

PerfectionReport IsoChecker::lattice_check(const SignedBijection &iso,
                                           bool collect_all) const {
  PerfectionReport rep;
  rep.verdict = true;
  auto run = [&](const DvrLattice &from, const DvrLattice &into, bool forward,
                 const char *name) {
    for (int r = 0; r < from.rank(); ++r) {
      std::vector<CycNum> img =
          forward ? push_vector(from.rows()[r], iso.perm, iso.signs)
                  : pull_vector(from.rows()[r], iso.perm, iso.signs);
      if (!into.contains(img)) {
        rep.verdict = false;
        rep.failures.push_back(
            Witness{name, r, -1, forward ? "forward" : "inverse"});
        if (!collect_all) return false;
      }
    }
    return true;
  };
  if (!run(cf_src_, cf_tgt_, true, "cf") && !collect_all) return rep;
  if (!run(cf_tgt_, cf_src_, false, "cf") && !collect_all) return rep;
  if (!run(cfp_src_, cfp_tgt_, true, "cf_pprime") && !collect_all) return rep;
  if (!run(cfp_tgt_, cfp_src_, false, "cf_pprime") && !collect_all) return rep;
  return rep;
}

PerfectionReport IsoChecker::mu_check(const SignedBijection &iso,
                                      bool collect_all) const {
  PerfectionReport rep;
  rep.verdict = true;
  int k = b_->k();
  int cg = int(val_src_[0].size()), ch = int(conj_tgt_[0].size());
  unsigned long dim = euler_phi(m_);
  std::vector<mpq_class> buf(2 * dim - 1);
  for (int g = 0; g < cg; ++g) {
    for (int h = 0; h < ch; ++h) {
      for (auto &q : buf) q = 0;
      for (int i = 0; i < k; ++i) {
        const auto &a = val_src_[i][g].coeffs();
        const auto &b = conj_tgt_[iso.perm[i]][h].coeffs();
        bool neg = iso.signs[i] < 0;
        for (size_t x = 0; x < dim; ++x) {
          if (a[x] == 0) continue;
          for (size_t y = 0; y < dim; ++y) {
            if (b[y] == 0) continue;
            if (neg)
              buf[x + y] -= a[x] * b[y];
            else
              buf[x + y] += a[x] * b[y];
          }
        }
      }
      CycNum mu = CycNum::from_coeffs(m_, buf);
      bool mixed = reg_src_[g] != reg_tgt_[h];
      if (mixed && !mu.is_zero()) {
        rep.verdict = false;
        rep.failures.push_back(Witness{"mu", g, h, "separation"});
        if (!collect_all) return rep;
        continue;
      }
      if (!ctx_->val_at_least(mu, std::max(cent_v_src_[g], cent_v_tgt_[h]))) {
        rep.verdict = false;
        rep.failures.push_back(Witness{"mu", g, h, "integrality"});
        if (!collect_all) return rep;
      }
    }
  }
  return rep;
}

PerfectionReport IsoChecker::central_check(const SignedBijection &iso,
                                           bool collect_all) const {
  PerfectionReport rep;
  rep.verdict = true;
  int k = b_->k();
  for (size_t g = 0; g < omega_src_.size(); ++g) {
    std::vector<CycNum> v(k);
    for (int i = 0; i < k; ++i) v[iso.perm[i]] = omega_src_[g][i];
    if (!central_tgt_.contains(v)) {
      rep.verdict = false;
      rep.failures.push_back(Witness{"central", int(g), -1, "forward"});
      if (!collect_all) return rep;
    }
  }
  for (size_t h = 0; h < omega_tgt_.size(); ++h) {
    std::vector<CycNum> v(k);
    for (int i = 0; i < k; ++i) v[i] = omega_tgt_[h][iso.perm[i]];
    if (!central_src_.contains(v)) {
      rep.verdict = false;
      rep.failures.push_back(Witness{"central", int(h), -1, "inverse"});
      if (!collect_all) return rep;
    }
  }
  return rep;
}

bool IsoChecker::prj_preserved(const std::vector<int> &perm,
                               const std::vector<int> &signs) const {
  if (prj_rank_mismatch_) return false;
  int k = b_->k();
  if (prj_src_64_ && prj_tgt_64_) {
    int64_t buf[32];
    for (const auto &row : prj_src_rows_) {
      for (int j = 0; j < k; ++j) buf[j] = 0;
      for (int i = 0; i < k; ++i)
        if (row[i]) buf[perm[i]] = signs[i] * row[i];
      if (!prj_tgt_64_->contains(buf)) return false;
    }
    for (const auto &row : prj_tgt_rows_) {
      for (int j = 0; j < k; ++j) buf[j] = 0;
      for (int i = 0; i < k; ++i) {
        long x = row[perm[i]];
        if (x) buf[i] = signs[i] * x;
      }
      if (!prj_src_64_->contains(buf)) return false;
    }
    return true;
  }
  for (int r = 0; r < prj_src_hnf_.rows(); ++r) {
    std::vector<mpz_class> v(k);
    for (int i = 0; i < k; ++i)
      v[perm[i]] = signs[i] * prj_src_hnf_.at(r, i);
    if (!in_row_lattice(prj_tgt_hnf_, v)) return false;
  }
  for (int r = 0; r < prj_tgt_hnf_.rows(); ++r) {
    std::vector<mpz_class> v(k);
    for (int i = 0; i < k; ++i)
      v[i] = signs[i] * prj_tgt_hnf_.at(r, perm[i]);
    if (!in_row_lattice(prj_src_hnf_, v)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// one-shot forms

PerfectionReport is_perfect_lattice(const SignedBijection &iso, CtxPtr ctx) {
  IsoChecker chk(iso.source, iso.target, std::move(ctx), IsoChecker::CF);
  return chk.lattice_check(iso, true);
}

PerfectionReport is_perfect_mu(const SignedBijection &iso, CtxPtr ctx) {
  IsoChecker chk(iso.source, iso.target, std::move(ctx), IsoChecker::MU);
  return chk.mu_check(iso, true);
}

PerfectionReport central_iso_check(const SignedBijection &iso, CtxPtr ctx) {
  IsoChecker chk(iso.source, iso.target, std::move(ctx), IsoChecker::CENTRAL);
  return chk.central_check(iso, true);
}

std::vector<std::vector<CycNum>> mu_matrix(const SignedBijection &iso) {
  const CharTable &tb = *iso.source->table, &tc = *iso.target->table;
  int k = iso.source->k();
  std::vector<std::vector<CycNum>> mu(
      tb.num_classes(), std::vector<CycNum>(tc.num_classes()));
  for (int g = 0; g < tb.num_classes(); ++g)
    for (int h = 0; h < tc.num_classes(); ++h) {
      CycNum s;
      for (int i = 0; i < k; ++i) {
        CycNum term =
            tb.values[iso.source->char_indices[i]][g] *
            tc.values[iso.target->char_indices[iso.perm[i]]][h].conjugate();
        s += iso.signs[i] == 1 ? term : -term;
      }
      mu[g][h] = s;
    }
  return mu;
}

SignedBijection identity_isometry(BlockPtr b) {
  int k = b->k();
  std::vector<int> perm(k), signs(k, 1);
  for (int i = 0; i < k; ++i) perm[i] = i;
  return SignedBijection(b, b, std::move(perm), std::move(signs));
}

SignedBijection compose(const SignedBijection &i, const SignedBijection &j) {
  if (!same_block(*i.target, *j.source))
    throw std::invalid_argument("compose: middle blocks differ");
  int k = i.source->k();
  std::vector<int> perm(k), signs(k);
  for (int a = 0; a < k; ++a) {
    perm[a] = j.perm[i.perm[a]];
    signs[a] = i.signs[a] * j.signs[i.perm[a]];
  }
  return SignedBijection(i.source, j.target, std::move(perm),
                         std::move(signs));
}

SignedBijection invert(const SignedBijection &i) {
  int k = i.source->k();
  std::vector<int> perm(k), signs(k);
  for (int a = 0; a < k; ++a) {
    perm[i.perm[a]] = a;
    signs[i.perm[a]] = i.signs[a];
  }
  return SignedBijection(i.target, i.source, std::move(perm),
                         std::move(signs));
}

BlockPtr product_block(const BlockPtr &b1, const BlockPtr &b2) {
  if (b1->k() != b1->table->num_chars() || b2->k() != b2->table->num_chars())
    throw std::invalid_argument("product_block: factors must be full tables");
  static std::mutex mu;
  static std::map<std::pair<std::string, std::string>, BlockPtr> cache;
  std::lock_guard<std::mutex> lk(mu);
  auto key = std::make_pair(b1->table->group_label, b2->table->group_label);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  BlockPtr blk = full_table_block(product_table(b1->table, b2->table));
  cache.emplace(key, blk);
  return blk;
}

SignedBijection tensor(const SignedBijection &i1, const SignedBijection &i2) {
  BlockPtr src = product_block(i1.source, i2.source);
  BlockPtr tgt = product_block(i1.target, i2.target);
  int k1 = i1.source->k(), k2 = i2.source->k();
  std::vector<int> perm(k1 * k2), signs(k1 * k2);
  for (int a = 0; a < k1; ++a)
    for (int b = 0; b < k2; ++b) {
      perm[a * k2 + b] = i1.perm[a] * k2 + i2.perm[b];
      signs[a * k2 + b] = i1.signs[a] * i2.signs[b];
    }
  return SignedBijection(src, tgt, std::move(perm), std::move(signs));
}

} // namespace perfiso

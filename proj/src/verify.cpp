#include "perfiso/verify.hpp"

#include <map>
#include <mutex>
#include <set>

#include "perfiso/descent.hpp"
#include "perfiso/sweep.hpp"

namespace perfiso {

using json = nlohmann::json;

namespace {

CtxPtr model_ctx(const TablePtr &t, int factor = 0) {
  return std::make_shared<const PrimeContext>(context_conductor(*t), factor);
}

std::mutex g_cache_mu;
std::map<std::string, EnumerationResult> g_enum_cache;

const EnumerationResult &cached(const std::string &key,
                                EnumerationResult (*compute)()) {
  std::lock_guard<std::mutex> lk(g_cache_mu);
  auto it = g_enum_cache.find(key);
  if (it != g_enum_cache.end()) return it->second;
  return g_enum_cache.emplace(key, compute()).first->second;
}

std::set<std::vector<int>> key_set(const std::vector<SignedBijection> &v) {
  std::set<std::vector<int>> s;
  for (const auto &i : v) s.insert(i.key());
  return s;
}

} // namespace

const EnumerationResult &cached_self_a4() {
  return cached("a4", [] {
    auto b = a4_block();
    return enumerate_self_perfect(b, model_ctx(b->table),
                                  SearchConfig::exhaustive());
  });
}

const EnumerationResult &cached_self_cyclic(int n) {
  static EnumerationResult (*fns[5])() = {
      nullptr,
      [] {
        auto b = cyclic_block(1);
        return enumerate_self_perfect(b, model_ctx(b->table),
                                      SearchConfig::exhaustive());
      },
      [] {
        auto b = cyclic_block(2);
        return enumerate_self_perfect(b, model_ctx(b->table),
                                      SearchConfig::exhaustive());
      },
      [] {
        auto b = cyclic_block(3);
        return enumerate_self_perfect(b, model_ctx(b->table),
                                      SearchConfig::exhaustive());
      },
      [] {
        auto b = cyclic_block(4);
        return enumerate_self_perfect(b, model_ctx(b->table),
                                      SearchConfig::proof_guided());
      }};
  if (n < 1 || n > 4) throw std::invalid_argument("cached_self_cyclic: n");
  return cached("cyc" + std::to_string(n), fns[n]);
}

const EnumerationResult &cached_self_product(int n) {
  static EnumerationResult (*fns[4])() = {
      nullptr,
      [] {
        auto b = product_block_c2n_a4(1);
        return enumerate_self_perfect(b, model_ctx(b->table),
                                      SearchConfig::proof_guided());
      },
      [] {
        auto b = product_block_c2n_a4(2);
        return enumerate_self_perfect(b, model_ctx(b->table),
                                      SearchConfig::proof_guided());
      },
      [] {
        auto b = product_block_c2n_a4(3);
        return enumerate_self_perfect(b, model_ctx(b->table),
                                      SearchConfig::proof_guided());
      }};
  if (n < 1 || n > 3) throw std::invalid_argument("cached_self_product: n");
  return cached("prod" + std::to_string(n), fns[n]);
}

const EnumerationResult &cached_cross_a4a5(int factor) {
  static EnumerationResult (*fns[2])() = {
      [] {
        auto ctx = std::make_shared<const PrimeContext>(15, 0);
        return enumerate_perfect_between(a4_block(), a5_principal_block(), ctx,
                                         SearchConfig::exhaustive());
      },
      [] {
        auto ctx = std::make_shared<const PrimeContext>(15, 1);
        return enumerate_perfect_between(a4_block(), a5_principal_block(), ctx,
                                         SearchConfig::exhaustive());
      }};
  if (factor < 0 || factor > 1) throw std::invalid_argument("factor");
  return cached("cross" + std::to_string(factor), fns[factor]);
}

// ---------------------------------------------------------------------------

TargetResult verify_prop24(const VerifyOptions &) {
  TargetResult r{"prop24", false, false, {}};
  const EnumerationResult &res = cached_self_a4();
  GroupReport g = group_structure(res);
  bool family = g.family_matched.value_or(false);
  r.pass = res.count == 48 && res.nodes_visited == 384 && g.closure_verified &&
           family && res.checker_disagreements == 0;
  json isos = json::array();
  for (const auto &i : res.isometries) isos.push_back(i.to_json());
  r.details = json{{"count", res.count},
                   {"nodes", res.nodes_visited},
                   {"order", g.order},
                   {"family_matched", family},
                   {"disagreements", res.checker_disagreements},
                   {"isometries", isos}};
  return r;
}

TargetResult verify_prop26(int n, const VerifyOptions &opt) {
  TargetResult r{"prop26(n=" + std::to_string(n) + ")", false, false, {}};
  if (n < 1 || n > 4) throw std::invalid_argument("prop26: 1 <= n <= 4");
  bool exhaustive = opt.strategy == "auto" ? n <= 3
                    : opt.strategy == "exhaustive";
  if (exhaustive && n > 3)
    throw std::invalid_argument("prop26: exhaustive search is guarded to n <= 3");
  EnumerationResult res;
  if (opt.node_limit || opt.strategy != "auto") {
    auto b = cyclic_block(n);
    SearchConfig cfg =
        exhaustive ? SearchConfig::exhaustive() : SearchConfig::proof_guided();
    cfg.node_limit = opt.node_limit;
    cfg.parallel_width = opt.jobs;
    res = enumerate_self_perfect(b, model_ctx(b->table), cfg);
  } else {
    res = cached_self_cyclic(n);
  }
  if (res.node_limit_hit) {
    r.node_limit_hit = true;
    r.details = json{{"node_limit_hit", true}, {"nodes", res.nodes_visited}};
    return r;
  }
  GroupReport g = group_structure(res);
  bool family = g.family_matched.value_or(false);
  long expected = 1L << (2 * n);
  r.pass = res.count == expected && g.closure_verified && family &&
           res.checker_disagreements == 0;
  json isos = json::array();
  for (const auto &i : res.isometries) isos.push_back(i.to_json());
  r.details = json{{"count", res.count},
                   {"expected", expected},
                   {"nodes", res.nodes_visited},
                   {"family_matched", family},
                   {"disagreements", res.checker_disagreements},
                   {"strategy", exhaustive ? "exhaustive" : "proof-guided"},
                   {"isometries", isos}};
  return r;
}

TargetResult verify_thm27(int n, const VerifyOptions &opt) {
  TargetResult r{"thm27(n=" + std::to_string(n) + ")", false, false, {}};
  if (n < 1 || n > 3) throw std::invalid_argument("thm27: 1 <= n <= 3");
  if (opt.strategy == "exhaustive" && n > 1)
    throw std::invalid_argument("thm27: exhaustive search is guarded to n <= 1");
  const EnumerationResult &res = cached_self_product(n);
  GroupReport g = group_structure(res);
  bool family = g.family_matched.value_or(false);
  long expected = 48L << (2 * n - 1);
  bool pass = res.count == expected && g.closure_verified && family &&
              res.checker_disagreements == 0;
  json isos = json::array();
  for (const auto &i : res.isometries) isos.push_back(i.to_json());
  json details{{"count", res.count},
               {"expected", expected},
               {"family_matched", family},
               {"disagreements", res.checker_disagreements},
               {"isometries", isos}};
  if (n == 1) {
    auto b = product_block_c2n_a4(1);
    SearchConfig cfg = SearchConfig::exhaustive();
    cfg.parallel_width = opt.jobs;
    cfg.node_limit = opt.node_limit;
    EnumerationResult ex =
        enumerate_self_perfect(b, model_ctx(b->table), cfg);
    if (ex.node_limit_hit) {
      r.node_limit_hit = true;
      r.details = json{{"node_limit_hit", true}, {"nodes", ex.nodes_visited}};
      return r;
    }
    bool same = key_set(ex.isometries) == key_set(res.isometries);
    pass = pass && same && ex.checker_disagreements == 0;
    details["exhaustive_agrees"] = same;
    details["exhaustive_nodes"] = ex.nodes_visited;
    details["exhaustive_disagreements"] = ex.checker_disagreements;
  }
  r.pass = pass;
  r.details = std::move(details);
  return r;
}

TargetResult verify_lemma_roots(int nmax, const VerifyOptions &opt) {
  TargetResult r{"lemma-roots(nmax=" + std::to_string(nmax) + ")", false,
                 false, {}};
  if (nmax > 4) throw std::invalid_argument("lemma-roots: nmax <= 4");
  unsigned long long violations = 0, multisets = 0;
  json per = json::array();
  for (int n = 1; n <= nmax; ++n)
    for (int m = 1; m <= n; ++m) {
      SweepOutcome out = lemma_sweep_kernel(n, m, opt.jobs);
      violations += out.violations;
      multisets += out.multisets;
      per.push_back(json{{"n", n},
                         {"m", m},
                         {"multisets", out.multisets},
                         {"zero", out.zero},
                         {"all_equal", out.all_equal},
                         {"not_in_ideal", out.not_in_ideal},
                         {"violations", out.violations}});
    }
  r.pass = violations == 0;
  r.details = json{{"violations", violations},
                   {"multisets", multisets},
                   {"sweeps", per}};
  return r;
}

TargetResult verify_blocks(const VerifyOptions &opt) {
  TargetResult r{"blocks", true, false, {}};
  json details = json::array();
  auto check = [&](const std::string &label, bool ok, json j) {
    j["name"] = label;
    j["pass"] = ok;
    details.push_back(j);
    if (!ok) r.pass = false;
  };

  auto block_dumps = [](const std::vector<BlockPtr> &blocks) {
    json a = json::array();
    for (const auto &b : blocks) a.push_back(b->to_json());
    return a;
  };
  {
    auto t = a4_table();
    auto blocks = partition_blocks(t, *model_ctx(t));
    check("A4", blocks.size() == 1 && blocks[0]->k() == 4 &&
                    blocks[0]->l() == 3 && blocks[0]->defect == 2,
          json{{"blocks", block_dumps(blocks)}});
  }
  {
    auto t = a5_table();
    int factors = opt.prime_factor >= 0 ? 1 : 2;
    std::vector<std::vector<int>> first_partition;
    for (int f = 0; f < factors; ++f) {
      int which = opt.prime_factor >= 0 ? opt.prime_factor : f;
      auto ctx = std::make_shared<const PrimeContext>(15, which);
      auto blocks = partition_blocks(t, *ctx);
      bool ok = blocks.size() == 2 &&
                blocks[0]->char_indices == std::vector<int>{0, 1, 2, 4} &&
                blocks[0]->defect == 2 && blocks[0]->l() == 3 &&
                blocks[1]->char_indices == std::vector<int>{3} &&
                blocks[1]->defect == 0;
      std::vector<int> shape;
      for (const auto &b : blocks) shape.push_back(b->k());
      if (f == 0)
        first_partition = {blocks[0]->char_indices, blocks[1]->char_indices};
      else
        ok = ok && first_partition[0] == blocks[0]->char_indices &&
             first_partition[1] == blocks[1]->char_indices;
      check("A5[P" + std::to_string(which) + "]", ok,
            json{{"split", shape}, {"blocks", block_dumps(blocks)}});
    }
  }
  for (int n = 1; n <= 3; ++n) {
    auto t = model_table(n, ModelFamily::A4);
    auto blocks = partition_blocks(t, *model_ctx(t));
    bool ok = blocks.size() == 1 && blocks[0]->k() == (1 << (n + 2)) &&
              blocks[0]->l() == 3 && blocks[0]->defect == n + 2;
    check("C" + std::to_string(1 << n) + "xA4", ok,
          json{{"blocks", block_dumps(blocks)}});
  }
  for (int n = 1; n <= 2; ++n) {
    auto t = model_table(n, ModelFamily::A5);
    auto blocks = partition_blocks(t, *model_ctx(t));
    bool ok = blocks.size() == 2 && blocks[0]->k() == (1 << (n + 2)) &&
              blocks[0]->l() == 3 && blocks[0]->defect == n + 2 &&
              blocks[1]->k() == (1 << n) && blocks[1]->l() == 1 &&
              blocks[1]->defect == n;
    check("C" + std::to_string(1 << n) + "xA5", ok,
          json{{"blocks", block_dumps(blocks)}});
  }
  r.details = std::move(details);
  return r;
}

TargetResult verify_cross_a4a5(const VerifyOptions &opt) {
  TargetResult r{"cross-a4a5", false, false, {}};
  std::vector<int> factors =
      opt.prime_factor >= 0 ? std::vector<int>{opt.prime_factor}
                            : std::vector<int>{0, 1};
  bool pass = true;
  json details;
  std::set<std::vector<int>> first_keys;
  for (size_t i = 0; i < factors.size(); ++i) {
    const EnumerationResult &res = cached_cross_a4a5(factors[i]);
    pass = pass && res.count == 48 && res.checker_disagreements == 0;
    auto keys = key_set(res.isometries);
    if (i == 0)
      first_keys = keys;
    else
      pass = pass && keys == first_keys;
    details["count_P" + std::to_string(factors[i])] = res.count;
  }
  // torsor property against the A4 self-group
  const EnumerationResult &self = cached_self_a4();
  auto self_keys = key_set(self.isometries);
  const EnumerationResult &cross = cached_cross_a4a5(factors[0]);
  bool torsor = long(cross.isometries.size()) == self.count;
  for (const auto &x : cross.isometries) {
    for (const auto &y : cross.isometries) {
      if (!self_keys.count(compose(x, invert(y)).key())) {
        torsor = false;
        break;
      }
    }
    if (!torsor) break;
  }
  pass = pass && torsor;
  details["torsor_verified"] = torsor;
  r.pass = pass;
  r.details = std::move(details);
  return r;
}

TargetResult verify_descent(int n, const VerifyOptions &) {
  TargetResult r{"descent(n=" + std::to_string(n) + ")", false, false, {}};
  if (n < 1 || n > 2) throw std::invalid_argument("descent: n in {1, 2}");
  Embedding e = index2_embedding(n, ModelFamily::A4);
  BlockPtr sup = product_block_c2n_a4(n);
  BlockPtr sub = n == 1 ? a4_block() : product_block_c2n_a4(n - 1);
  CoveringData cov = covering_fusion(e, sup, sub);
  CtxPtr sub_ctx = model_ctx(sub->table);
  IsoChecker sub_chk(sub, sub, sub_ctx, IsoChecker::CF | IsoChecker::MU);

  const EnumerationResult &isos = cached_self_product(n);
  long held = 0, descended_perfect = 0;
  json records = json::array();
  for (const auto &iso : isos.isometries) {
    DescentResult d = descend(iso, cov, cov, sub_chk);
    if (d.hypothesis_held) ++held;
    bool perfect = d.hypothesis_held && d.lattice_report.verdict &&
                   d.mu_report.verdict;
    if (perfect) ++descended_perfect;
    records.push_back(
        json{{"source_iso", iso.to_json()},
             {"hypothesis_held", d.hypothesis_held},
             {"descended_iso",
              d.descended ? d.descended->to_json() : json()},
             {"perfect", perfect}});
  }
  bool all_descend = held == isos.count && descended_perfect == isos.count;

  // sign-twist analysis
  SignedBijection j = sgn_twist(sup, e);
  CtxPtr ctx = model_ctx(sup->table);
  bool j_perfect = is_perfect_lattice(j, ctx).verdict &&
                   is_perfect_mu(j, ctx).verdict;
  bool j_order2 =
      compose(j, j).key() == identity_isometry(sup).key() &&
      !(j.key() == identity_isometry(sup).key());
  // fixes Zprj pointwise
  bool j_fixes_prj = true;
  for (int row = 0; row < sup->prj_basis.rows(); ++row) {
    std::vector<mpz_class> img(sup->k());
    for (int i = 0; i < sup->k(); ++i)
      img[j.perm[i]] = j.signs[i] * sup->prj_basis.at(row, i);
    if (img != sup->prj_basis.row(row)) j_fixes_prj = false;
  }
  // J is the family element (j, l, sigma, eps) = (1, 2^{n-1}, id, +1)
  SignedBijection family_elt = tensor(
      make_I_jl_eps(n, 1, 1L << (n - 1), 1),
      make_I_sigma_eps(a4_block(), {0, 1, 2, 3}, 1));
  bool j_is_family = j.key() == family_elt.key();
  // conjugation by every self-isometry fixes J
  bool j_conj_fixed = true;
  for (const auto &iso : isos.isometries) {
    if (compose(compose(invert(iso), j), iso).key() != j.key()) {
      j_conj_fixed = false;
      break;
    }
  }
  // descending J gives the identity
  DescentResult dj = descend(j, cov, cov, sub_chk);
  bool j_descends_to_id =
      dj.hypothesis_held &&
      dj.descended->key() == identity_isometry(sub).key();

  r.pass = all_descend && j_perfect && j_order2 && j_fixes_prj &&
           j_is_family && j_conj_fixed && j_descends_to_id;
  r.details = json{{"isometries", isos.count},
                   {"hypothesis_held", held},
                   {"descended_perfect", descended_perfect},
                   {"sgn_twist_perfect", j_perfect},
                   {"sgn_twist_order2", j_order2},
                   {"sgn_twist_fixes_prj", j_fixes_prj},
                   {"sgn_twist_is_(1,2^{n-1},id,+1)", j_is_family},
                   {"sgn_twist_conjugation_invariant", j_conj_fixed},
                   {"sgn_twist_descends_to_identity", j_descends_to_id},
                   {"records", records}};
  return r;
}

TargetResult verify_centres(int nmax, const VerifyOptions &opt) {
  TargetResult r{"centres", false, false, {}};
  long checked = 0, failed = 0;
  json details;

  auto run_set = [&](const EnumerationResult &res, const BlockPtr &b,
                     const BlockPtr &c, CtxPtr ctx) {
    IsoChecker chk(b, c, ctx, IsoChecker::CENTRAL);
    for (const auto &iso : res.isometries) {
      ++checked;
      if (!chk.central_check(iso).verdict) ++failed;
    }
  };

  run_set(cached_self_a4(), a4_block(), a4_block(),
          model_ctx(a4_table()));
  for (int n = 1; n <= std::min(nmax, 3); ++n)
    run_set(cached_self_cyclic(n), cyclic_block(n), cyclic_block(n),
            model_ctx(cyclic_table(1UL << n)));
  for (int n = 1; n <= std::min(nmax, 2); ++n) {
    auto b = product_block_c2n_a4(n);
    run_set(cached_self_product(n), b, b, model_ctx(b->table));
  }
  std::vector<int> factors =
      opt.prime_factor >= 0 ? std::vector<int>{opt.prime_factor}
                            : std::vector<int>{0, 1};
  for (int f : factors)
    run_set(cached_cross_a4a5(f), a4_block(), a5_principal_block(),
            std::make_shared<const PrimeContext>(15, f));
  details["isometries_checked"] = checked;
  details["central_failures"] = failed;

  // centre restriction on the descent instances
  long restr_checked = 0, restr_failed = 0;
  for (int n = 1; n <= std::min(nmax, 2); ++n) {
    Embedding e = index2_embedding(n, ModelFamily::A4);
    BlockPtr sup = product_block_c2n_a4(n);
    BlockPtr sub = n == 1 ? a4_block() : product_block_c2n_a4(n - 1);
    CoveringData cov = covering_fusion(e, sup, sub);
    CtxPtr sub_ctx = model_ctx(sub->table);
    for (const auto &iso : cached_self_product(n).isometries) {
      ++restr_checked;
      if (!verify_centre_restriction(iso, cov, cov, sub_ctx)) ++restr_failed;
    }
  }
  details["restrictions_checked"] = restr_checked;
  details["restriction_failures"] = restr_failed;

  r.pass = failed == 0 && restr_failed == 0;
  r.details = std::move(details);
  return r;
}

} // namespace perfiso

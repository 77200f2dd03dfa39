#include "perfiso/search.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <functional>
#include <map>
#include <mutex>
#include <set>

#include <omp.h>

namespace perfiso {

bool EnumerationResult::contains(const SignedBijection &iso) const {
  auto key = iso.key();
  for (const auto &i : isometries)
    if (i.key() == key) return true;
  return false;
}

// ---------------------------------------------------------------------------
// cached model blocks

BlockPtr a4_block() {
  static BlockPtr b = full_table_block(a4_table());
  return b;
}

BlockPtr a5_principal_block() {
  static BlockPtr b = [] {
    auto ctx = std::make_shared<const PrimeContext>(15, 0);
    return partition_blocks(a5_table(), *ctx)[0];
  }();
  return b;
}

BlockPtr cyclic_block(int n) {
  static std::mutex mu;
  static std::map<int, BlockPtr> cache;
  std::lock_guard<std::mutex> lk(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  BlockPtr b = full_table_block(cyclic_table(1UL << n));
  cache.emplace(n, b);
  return b;
}

BlockPtr product_block_c2n_a4(int n) {
  return product_block(cyclic_block(n), a4_block());
}

// ---------------------------------------------------------------------------
// closed-form families

SignedBijection make_I_sigma_eps(const BlockPtr &b,
                                 const std::array<int, 4> &sigma, int eps) {
  if (b->k() != 4) throw std::invalid_argument("I_sigma_eps needs k = 4");
  static const int delta[4] = {1, 1, 1, -1};
  std::vector<int> perm(4), signs(4);
  for (int j = 0; j < 4; ++j) {
    perm[j] = sigma[j];
    signs[j] = eps * delta[j] * delta[sigma[j]];
  }
  return SignedBijection(b, b, std::move(perm), std::move(signs));
}

SignedBijection make_I_jl_eps(int n, long j, long l, int eps) {
  long m = 1L << n;
  if (j % 2 == 0 || j < 0 || j >= m || l < 0 || l >= m)
    throw std::invalid_argument("I_{j,l,eps}: need odd 0 <= j < 2^n, 0 <= l < 2^n");
  BlockPtr b = cyclic_block(n);
  std::vector<int> perm(m), signs(m, eps);
  for (long i = 0; i < m; ++i) perm[i] = int((j * (i + l)) % m);
  return SignedBijection(b, b, std::move(perm), std::move(signs));
}

std::vector<SignedBijection> sigma_eps_family(const BlockPtr &b) {
  std::vector<SignedBijection> fam;
  std::array<int, 4> sigma = {0, 1, 2, 3};
  std::vector<std::array<int, 4>> perms;
  do {
    perms.push_back(sigma);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  for (const auto &s : perms)
    for (int eps : {1, -1}) fam.push_back(make_I_sigma_eps(b, s, eps));
  return fam;
}

std::vector<SignedBijection> jl_family(int n) {
  std::vector<SignedBijection> fam;
  long m = 1L << n;
  for (long j = 1; j < m; j += 2)
    for (long l = 0; l < m; ++l)
      for (int eps : {1, -1}) fam.push_back(make_I_jl_eps(n, j, l, eps));
  return fam;
}

std::vector<SignedBijection> tensor_family(int n) {
  std::vector<SignedBijection> fam;
  long m = 1L << n;
  auto a4b = a4_block();
  std::array<int, 4> sigma = {0, 1, 2, 3};
  std::vector<std::array<int, 4>> perms;
  do {
    perms.push_back(sigma);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  for (long j = 1; j < m; j += 2)
    for (long l = 0; l < m; ++l) {
      SignedBijection cyc = make_I_jl_eps(n, j, l, 1);
      for (const auto &s : perms)
        for (int eps : {1, -1})
          fam.push_back(tensor(cyc, make_I_sigma_eps(a4b, s, eps)));
    }
  return fam;
}

// ---------------------------------------------------------------------------
// block kinds

namespace {

enum class BlockKind { A4Type, CyclicType, ProductA4Type, Other };

int log2_exact(unsigned long v) {
  int n = 0;
  while (v > 1 && v % 2 == 0) {
    v /= 2;
    ++n;
  }
  return v == 1 ? n : -1;
}

BlockKind detect_kind(const Block &b, int *n_out) {
  const std::string &label = b.table->group_label;
  bool full = b.k() == b.table->num_chars();
  if (!full) return BlockKind::Other;
  if (label == "A4") return BlockKind::A4Type;
  if (label.size() > 1 && label[0] == 'C' &&
      label.find('x') == std::string::npos) {
    int n = log2_exact(std::stoul(label.substr(1)));
    if (n >= 0) {
      if (n_out) *n_out = n;
      return BlockKind::CyclicType;
    }
  }
  auto pos = label.find("xA4");
  if (pos != std::string::npos && pos + 3 == label.size() && label[0] == 'C') {
    int n = log2_exact(std::stoul(label.substr(1, pos - 1)));
    if (n >= 1) {
      if (n_out) *n_out = n;
      return BlockKind::ProductA4Type;
    }
  }
  return BlockKind::Other;
}

void sort_canonically(std::vector<SignedBijection> &v) {
  std::sort(v.begin(), v.end(),
            [](const SignedBijection &a, const SignedBijection &b) {
              return a.key() < b.key();
            });
}

// full verification of one candidate: normative lattice verdict, mu verdict
// recorded for cross-validation
struct VerifyCounts {
  unsigned long long full = 0, disagree = 0;
};

bool verify_candidate(const IsoChecker &chk, const SignedBijection &iso,
                      VerifyCounts &vc) {
  bool lat = chk.lattice_check(iso).verdict;
  bool mu = chk.mu_check(iso).verdict;
  ++vc.full;
  if (lat != mu) ++vc.disagree;
  return lat;
}

// ---------------------------------------------------------------------------
// exhaustive enumeration

EnumerationResult exhaustive_enum(const BlockPtr &b, const BlockPtr &c,
                                  CtxPtr ctx, const SearchConfig &cfg) {
  EnumerationResult res;
  int k = b->k();
  if (c->k() != k) return res;
  if (k > 8)
    throw std::invalid_argument("EXHAUSTIVE search is guarded to k(B) <= 8");

  IsoChecker chk(b, c, ctx,
                 IsoChecker::CF | IsoChecker::MU | IsoChecker::PRJ);
  const auto &cod_s = chk.codegree_src();
  const auto &cod_t = chk.codegree_tgt();

  struct Local {
    std::vector<SignedBijection> found;
    unsigned long long nodes = 0;
    VerifyCounts vc;
  };
  int tasks = 2 * k;
  std::vector<Local> locals(tasks);
  std::atomic<bool> abort{false};
  std::atomic<unsigned long long> global_nodes{0};
  unsigned long long limit =
      cfg.node_limit ? *cfg.node_limit : ~0ULL;

  int nthreads = cfg.parallel_width > 0 ? cfg.parallel_width
                                        : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 1) num_threads(nthreads)
  for (int task = 0; task < tasks; ++task) {
    if (abort.load(std::memory_order_relaxed)) continue;
    Local &loc = locals[task];
    int t0 = task / 2;
    int s0 = (task % 2) ? -1 : 1;
    if (cod_s[0] != cod_t[t0]) continue;
    std::vector<int> perm(k), signs(k);
    std::vector<char> used(k, 0);
    perm[0] = t0;
    signs[0] = s0;
    used[t0] = 1;
    unsigned long long since_sync = 0;

    const bool limited = cfg.node_limit.has_value();
    auto leaf = [&]() {
      ++loc.nodes;
      if (++since_sync >= (limited ? 1ULL : 8192ULL)) {
        if (global_nodes.fetch_add(since_sync) + since_sync > limit)
          abort.store(true, std::memory_order_relaxed);
        since_sync = 0;
      }
      if (!chk.prj_preserved(perm, signs)) return;
      SignedBijection iso(b, c, perm, signs);
      if (verify_candidate(chk, iso, loc.vc)) loc.found.push_back(iso);
    };

    std::function<void(int)> dfs = [&](int pos) {
      if (abort.load(std::memory_order_relaxed)) return;
      if (pos == k) {
        leaf();
        return;
      }
      for (int t = 0; t < k; ++t) {
        if (used[t] || cod_s[pos] != cod_t[t]) continue;
        used[t] = 1;
        perm[pos] = t;
        signs[pos] = 1;
        dfs(pos + 1);
        signs[pos] = -1;
        dfs(pos + 1);
        used[t] = 0;
      }
    };
    dfs(1);
    global_nodes.fetch_add(since_sync);
  }

  for (auto &loc : locals) {
    res.nodes_visited += loc.nodes;
    res.full_checks += loc.vc.full;
    res.checker_disagreements += loc.vc.disagree;
    for (auto &iso : loc.found) res.isometries.push_back(std::move(iso));
  }
  res.node_limit_hit = abort.load();
  sort_canonically(res.isometries);
  res.count = long(res.isometries.size());
  return res;
}

// ---------------------------------------------------------------------------
// proof-guided enumeration for O C_{2^n}: all-equal signs are forced by the
// rank-one projective lattice and the image of the point-indicator class
// functions forces theta_i -> eps theta_{j(i+l)}; every candidate from that
// family shape is verified in full before being counted.

EnumerationResult pg_cyclic(const BlockPtr &b, CtxPtr ctx,
                            const SearchConfig &cfg, int n) {
  EnumerationResult res;
  IsoChecker chk(b, b, ctx, IsoChecker::CF | IsoChecker::MU | IsoChecker::PRJ);
  VerifyCounts vc;
  for (const SignedBijection &iso : jl_family(n)) {
    ++res.nodes_visited;
    if (cfg.node_limit && res.nodes_visited > *cfg.node_limit) {
      res.node_limit_hit = true;
      break;
    }
    if (verify_candidate(chk, iso, vc)) res.isometries.push_back(iso);
  }
  res.full_checks = vc.full;
  res.checker_disagreements = vc.disagree;
  sort_canonically(res.isometries);
  res.count = long(res.isometries.size());
  return res;
}

// ---------------------------------------------------------------------------
// proof-guided enumeration for O (C_{2^n} x A4), mirroring the structure of
// the classification proof:
//   phase 1: the induced map on the projective lattice pins the A4-family
//            permutation tau and per-family signs (constant along each
//            theta-line because projective elements have constant
//            theta-coefficients);
//   phase 2: root-of-unity constraints from the class function
//            (1/4) theta_j x (chi1+chi2+chi3-chi4) collapse the four
//            theta-images of each theta-line to a single index;
//   phase 3: the point-indicator constraints of the cyclic factor restrict
//            the line permutation to the affine family;
// every assembled candidate is then fully verified by both checkers.

struct Skeleton {
  std::array<int, 4> tau;
  std::array<int, 4> s;
};

EnumerationResult pg_product(const BlockPtr &b, CtxPtr ctx,
                             const SearchConfig &cfg, int n) {
  EnumerationResult res;
  int k = b->k();
  long m = 1L << n;
  long half = m / 2; // exponent with zeta^half = -1 (half = 1 when n = 1)
  IsoChecker chk(b, b, ctx, IsoChecker::CF | IsoChecker::MU | IsoChecker::PRJ);
  auto ctx2 = two_power_context(n);
  static const int delta[4] = {1, 1, 1, -1};
  static const int srcsign[4] = {1, 1, 1, -1};

  // phase 1: skeletons (tau, s) whose structural prj image equals prj
  std::vector<Skeleton> skeletons;
  {
    std::array<int, 4> tau = {0, 1, 2, 3};
    std::vector<std::array<int, 4>> perms;
    do {
      perms.push_back(tau);
    } while (std::next_permutation(tau.begin(), tau.end()));
    for (const auto &t : perms)
      for (int mask = 0; mask < 16; ++mask) {
        std::array<int, 4> s;
        for (int i = 0; i < 4; ++i) s[i] = (mask >> i) & 1 ? -1 : 1;
        IntMat img(0, 0);
        for (int l = 0; l < 3; ++l) {
          std::vector<mpz_class> row(k);
          for (long i = 0; i < m; ++i) {
            row[i * 4 + t[l]] += s[l];
            row[i * 4 + t[3]] += s[3];
          }
          img.append_row(row);
        }
        if (hnf(img) == b->prj_basis) skeletons.push_back({t, s});
      }
  }

  // phase 3 data: admissible theta-line permutations (independent of the
  // skeleton); rho must satisfy sum_i zeta^{rho(i) t - i k} in 2^n O for all
  // (t, k)
  std::vector<std::vector<int>> rhos;
  {
    std::vector<int> rho(m);
    for (long i = 0; i < m; ++i) rho[i] = int(i);
    std::vector<std::vector<int>> all;
    do {
      all.push_back(rho);
    } while (std::next_permutation(rho.begin(), rho.end()));
    int nthreads = cfg.parallel_width > 0 ? cfg.parallel_width
                                          : omp_get_max_threads();
    std::vector<char> ok(all.size(), 0);
#pragma omp parallel for schedule(dynamic, 64) num_threads(nthreads)
    for (size_t idx = 0; idx < all.size(); ++idx) {
      const auto &r = all[idx];
      bool good = true;
      std::vector<long> exps(m);
      for (long t = 0; t < m && good; ++t)
        for (long k2 = 0; k2 < m && good; ++k2) {
          for (long i = 0; i < m; ++i)
            exps[i] = ((r[i] * t - i * k2) % m + m) % m;
          if (root_sum_classify(n, n, exps) == RootSumClass::NOT_IN_IDEAL)
            good = false;
        }
      ok[idx] = good;
    }
    for (size_t idx = 0; idx < all.size(); ++idx)
      if (ok[idx]) rhos.push_back(all[idx]);
  }

  VerifyCounts vc;
  std::map<std::array<int, 4>, std::vector<std::vector<std::array<long, 4>>>>
      quad_cache;
  for (const Skeleton &sk : skeletons) {
    // phase 2: admissible image quadruples for one theta-line, from the
    // pairwise congruences c_m zeta^{j_m} = c_{m'} zeta^{j_{m'}} mod 4O and
    // the summed constraint (classified through the roots-of-unity lemma)
    std::array<int, 4> c;
    for (int mm = 0; mm < 4; ++mm)
      c[mm] = delta[sk.tau[mm]] * srcsign[mm] * sk.s[mm];
    // map from j_1 to the full quadruple (unique continuation expected)
    auto cache_it = quad_cache.find(c);
    if (cache_it == quad_cache.end()) {
      std::vector<std::vector<std::array<long, 4>>> by_first(m);
      std::array<long, 4> q;
      for (q[0] = 0; q[0] < m; ++q[0])
        for (q[1] = 0; q[1] < m; ++q[1])
          for (q[2] = 0; q[2] < m; ++q[2])
            for (q[3] = 0; q[3] < m; ++q[3]) {
              std::vector<long> exps(4);
              for (int mm = 0; mm < 4; ++mm)
                exps[mm] = (q[mm] + (c[mm] < 0 ? half : 0)) % m;
              if (root_sum_classify(n, 2, exps) == RootSumClass::NOT_IN_IDEAL)
                continue;
              bool pair_ok = true;
              for (int a = 0; a < 4 && pair_ok; ++a)
                for (int bb = a + 1; bb < 4 && pair_ok; ++bb) {
                  CycNum diff = CycNum::root_of_unity(m, exps[a]) -
                                CycNum::root_of_unity(m, exps[bb]);
                  if (!ctx2->in_scaled_ring(diff, 2)) pair_ok = false;
                }
              if (pair_ok) by_first[q[0]].push_back(q);
            }
      cache_it = quad_cache.emplace(c, std::move(by_first)).first;
    }
    const auto &by_first = cache_it->second;
    // phase 3 + assembly
    for (const auto &rho : rhos) {
      bool dead = false;
      std::vector<int> perm(k), signs(k);
      for (long i = 0; i < m && !dead; ++i) {
        const auto &quads = by_first[rho[i]];
        if (quads.size() != 1) {
          dead = quads.empty();
          if (!dead)
            throw std::logic_error(
                "ambiguous quadruple continuation in guided search");
          break;
        }
        const auto &q = quads[0];
        for (int mm = 0; mm < 4; ++mm) {
          perm[i * 4 + mm] = int(q[mm] * 4 + sk.tau[mm]);
          signs[i * 4 + mm] = sk.s[mm];
        }
      }
      if (dead) continue;
      ++res.nodes_visited;
      if (cfg.node_limit && res.nodes_visited > *cfg.node_limit) {
        res.node_limit_hit = true;
        break;
      }
      SignedBijection iso(b, b, perm, signs); // throws if not a bijection
      if (verify_candidate(chk, iso, vc)) res.isometries.push_back(iso);
    }
    if (res.node_limit_hit) break;
  }
  res.full_checks = vc.full;
  res.checker_disagreements = vc.disagree;
  sort_canonically(res.isometries);
  res.count = long(res.isometries.size());
  return res;
}

} // namespace

EnumerationResult enumerate_self_perfect(const BlockPtr &b, CtxPtr ctx,
                                         const SearchConfig &cfg) {
  if (cfg.strategy == Strategy::EXHAUSTIVE)
    return exhaustive_enum(b, b, std::move(ctx), cfg);
  int n = 0;
  switch (detect_kind(*b, &n)) {
    case BlockKind::ProductA4Type:
      return pg_product(b, std::move(ctx), cfg, n);
    case BlockKind::CyclicType:
      return pg_cyclic(b, std::move(ctx), cfg, n);
    default:
      if (b->k() <= 8) return exhaustive_enum(b, b, std::move(ctx), cfg);
      throw std::invalid_argument(
          "PROOF_GUIDED search supports cyclic and C_{2^n} x A4 blocks");
  }
}

EnumerationResult enumerate_perfect_between(const BlockPtr &b,
                                            const BlockPtr &c, CtxPtr ctx,
                                            const SearchConfig &cfg) {
  if (b->k() != c->k()) return EnumerationResult{};
  return exhaustive_enum(b, c, std::move(ctx), cfg);
}

GroupReport group_structure(const EnumerationResult &r) {
  GroupReport rep;
  rep.order = r.count;
  if (r.isometries.empty()) {
    rep.closure_verified = true;
    return rep;
  }
  std::map<std::vector<int>, int> index;
  for (size_t i = 0; i < r.isometries.size(); ++i)
    index.emplace(r.isometries[i].key(), int(i));
  for (const auto &x : r.isometries)
    for (const auto &y : r.isometries) {
      SignedBijection z = compose(x, y);
      if (!index.count(z.key()))
        throw std::logic_error("self-isometry set not closed under composition");
    }
  for (const auto &x : r.isometries)
    if (!index.count(invert(x).key()))
      throw std::logic_error("self-isometry set not closed under inversion");
  if (!index.count(identity_isometry(r.isometries[0].source).key()))
    throw std::logic_error("self-isometry set lacks the identity");
  rep.closure_verified = true;

  int n = 0;
  const Block &b = *r.isometries[0].source;
  std::vector<SignedBijection> family;
  switch (detect_kind(b, &n)) {
    case BlockKind::A4Type:
      family = sigma_eps_family(r.isometries[0].source);
      break;
    case BlockKind::CyclicType:
      family = jl_family(n);
      break;
    case BlockKind::ProductA4Type:
      family = tensor_family(n);
      break;
    default:
      return rep; // no expected family for this kind
  }
  std::set<std::vector<int>> fam_keys, got_keys;
  for (const auto &i : family) fam_keys.insert(i.key());
  for (const auto &i : r.isometries) got_keys.insert(i.key());
  rep.family_matched = (fam_keys == got_keys);
  return rep;
}

} // namespace perfiso

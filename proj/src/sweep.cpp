#include "perfiso/sweep.hpp"

#include <cassert>
#include <cstdlib>
#include <map>
#include <mutex>
#include <vector>

#include <omp.h>

namespace perfiso {

SweepOutcome &SweepOutcome::operator+=(const SweepOutcome &o) {
  multisets += o.multisets;
  zero += o.zero;
  all_equal += o.all_equal;
  not_in_ideal += o.not_in_ideal;
  violations += o.violations;
  fallbacks += o.fallbacks;
  return *this;
}

bool SweepOutcome::operator==(const SweepOutcome &o) const {
  return multisets == o.multisets && zero == o.zero &&
         all_equal == o.all_equal && not_in_ideal == o.not_in_ideal &&
         violations == o.violations;
}

namespace {

// integer coordinates of 2 (zeta_{2^n} - 1)^{-1}, an algebraic integer
const std::vector<int64_t> &divider_coords(int n) {
  static std::mutex mu;
  static std::map<int, std::vector<int64_t>> cache;
  std::lock_guard<std::mutex> lk(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  unsigned long m = 1UL << n;
  CycNum u = (CycNum::integer(2) *
              (CycNum::root_of_unity(m, 1) - CycNum::integer(1)).inverse())
                 .lifted_to(m);
  std::vector<int64_t> v(euler_phi(m));
  for (size_t i = 0; i < v.size(); ++i) {
    assert(u.coeffs()[i].get_den() == 1);
    v[i] = u.coeffs()[i].get_num().get_si();
  }
  return cache.emplace(n, std::move(v)).first->second;
}

enum Outcome { OUT_ZERO, OUT_ALL_EQUAL, OUT_NOT_IN_IDEAL, OUT_VIOLATION };

// exact fallback through the general engine
Outcome classify_general(int n, int m, const int64_t *counts) {
  unsigned long M = 1UL << n;
  std::vector<long> exps;
  for (unsigned long j = 0; j < M; ++j)
    for (int64_t r = 0; r < counts[j]; ++r) exps.push_back(long(j));
  try {
    switch (root_sum_classify(n, m, exps)) {
      case RootSumClass::ZERO:
        return OUT_ZERO;
      case RootSumClass::ALL_EQUAL:
        return OUT_ALL_EQUAL;
      case RootSumClass::NOT_IN_IDEAL:
        return OUT_NOT_IN_IDEAL;
    }
  } catch (const LemmaViolation &) {
    return OUT_VIOLATION;
  }
  return OUT_VIOLATION;
}

// int64 kernel: valuation by repeated division by (zeta - 1); the sum lies
// in 2^m O iff the division succeeds m * 2^{n-1} times.  u points to the
// coordinates of 2 (zeta - 1)^{-1} (unused for n = 1).
Outcome classify_fast(int n, int m, const int64_t *counts, const int64_t *u,
                      bool &fell_back) {
  unsigned long M = 1UL << n;

  if (n == 1) {
    int64_t s = counts[0] - counts[1];
    if (s == 0) return OUT_ZERO;
    if (counts[0] == 0 || counts[1] == 0) return OUT_ALL_EQUAL;
    int v = __builtin_ctzll(std::llabs(s));
    return v >= m ? OUT_VIOLATION : OUT_NOT_IN_IDEAL;
  }

  unsigned long half = M / 2;
  int64_t a[8];
  int nonzero = 0;
  bool zero = true;
  for (unsigned long j = 0; j < M; ++j)
    if (counts[j]) ++nonzero;
  for (unsigned long j = 0; j < half; ++j) {
    a[j] = counts[j] - counts[j + half];
    if (a[j]) zero = false;
  }
  if (zero) return OUT_ZERO;
  if (nonzero == 1) return OUT_ALL_EQUAL; // v = m * e exactly

  long target = long(m) * long(half); // m * e
  int64_t t[8];
  for (long v = 0;; ++v) {
    if (v == target) return OUT_VIOLATION;
    // coordinate-wise negacyclic product with early exit on an odd entry
    bool big = false;
    for (unsigned long r = 0; r < half; ++r) {
      int64_t acc = 0;
      for (unsigned long i = 0; i < half; ++i) {
        if (!a[i]) continue;
        unsigned long j = r >= i ? r - i : r + half - i;
        int64_t term = a[i] * u[j];
        acc += (r >= i) ? term : -term;
      }
      if (acc & 1) return OUT_NOT_IN_IDEAL;
      t[r] = acc / 2;
      if (std::llabs(t[r]) > (int64_t(1) << 52)) big = true;
    }
    if (big) {
      fell_back = true;
      return classify_general(n, m, counts);
    }
    for (unsigned long r = 0; r < half; ++r) a[r] = t[r];
  }
}

void tally(SweepOutcome &out, Outcome o) {
  ++out.multisets;
  switch (o) {
    case OUT_ZERO:
      ++out.zero;
      break;
    case OUT_ALL_EQUAL:
      ++out.all_equal;
      break;
    case OUT_NOT_IN_IDEAL:
      ++out.not_in_ideal;
      break;
    case OUT_VIOLATION:
      ++out.violations;
      break;
  }
}

// enumerate count vectors over positions [pos, M) with `left` remaining
template <typename Fn>
void enum_counts(int64_t *counts, unsigned long M, unsigned long pos,
                 int64_t left, Fn &&leaf) {
  if (pos + 1 == M) {
    counts[pos] = left;
    leaf(counts);
    return;
  }
  for (int64_t c = left; c >= 0; --c) {
    counts[pos] = c;
    enum_counts(counts, M, pos + 1, left - c, leaf);
  }
}

} // namespace

SweepOutcome lemma_sweep_kernel(int n, int m, int threads) {
  if (n < 1 || m < 1) throw std::invalid_argument("sweep: n, m >= 1");
  unsigned long M = 1UL << n;
  int64_t total = int64_t(1) << m;
  if (M == 2) {
    SweepOutcome out;
    int64_t counts[2];
    for (int64_t c0 = 0; c0 <= total; ++c0) {
      counts[0] = c0;
      counts[1] = total - c0;
      bool fb = false;
      tally(out, classify_fast(n, m, counts, nullptr, fb));
      if (fb) ++out.fallbacks;
    }
    return out;
  }
  const int64_t *u = divider_coords(n).data();

  // parallel over the first two coordinates
  std::vector<std::pair<int64_t, int64_t>> tasks;
  for (int64_t c0 = 0; c0 <= total; ++c0)
    for (int64_t c1 = 0; c1 + c0 <= total; ++c1) tasks.emplace_back(c0, c1);
  int nthreads = threads > 0 ? threads : omp_get_max_threads();
  std::vector<SweepOutcome> locals(tasks.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(nthreads)
  for (size_t ti = 0; ti < tasks.size(); ++ti) {
    int64_t counts[16];
    counts[0] = tasks[ti].first;
    counts[1] = tasks[ti].second;
    SweepOutcome &out = locals[ti];
    enum_counts(counts, M, 2, total - counts[0] - counts[1],
                [&](const int64_t *c) {
                  bool fb = false;
                  tally(out, classify_fast(n, m, c, u, fb));
                  if (fb) ++out.fallbacks;
                });
  }
  SweepOutcome out;
  for (const auto &loc : locals) out += loc;
  return out;
}

SweepOutcome lemma_sweep_reference(int n, int m) {
  if (n < 1 || m < 1) throw std::invalid_argument("sweep: n, m >= 1");
  unsigned long M = 1UL << n;
  int64_t total = int64_t(1) << m;
  SweepOutcome out;
  std::vector<int64_t> counts(M);
  enum_counts(counts.data(), M, 0, total, [&](const int64_t *c) {
    tally(out, classify_general(n, m, c));
  });
  return out;
}

} // namespace perfiso

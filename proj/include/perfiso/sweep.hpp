#pragma once

#include <cstdint>

#include "perfiso/cyclotomic.hpp"

namespace perfiso {

/// Tally of one exhaustive sweep of root-of-unity sums.  The sum of 2^m
/// powers of zeta_{2^n} depends only on the multiset of exponents, so the
/// sweep enumerates exponent multisets (count vectors); `multisets` is the
/// number classified.
struct SweepOutcome {
  unsigned long long multisets = 0;
  unsigned long long zero = 0;
  unsigned long long all_equal = 0;
  unsigned long long not_in_ideal = 0;
  unsigned long long violations = 0; // must stay 0
  unsigned long long fallbacks = 0;  // kernel overflow guards taken

  SweepOutcome &operator+=(const SweepOutcome &o);
  bool operator==(const SweepOutcome &o) const;
};

/// OpenMP kernel: classifies every sum of 2^m powers of zeta_{2^n} against
/// membership in 2^m O by repeated division by (zeta - 1) in int64
/// coordinates (with an exact-arithmetic fallback on overflow).
SweepOutcome lemma_sweep_kernel(int n, int m, int threads = 0);

/// Serial reference: the same enumeration driven through root_sum_classify
/// and the general ideal-lattice valuation engine.
SweepOutcome lemma_sweep_reference(int n, int m);

} // namespace perfiso

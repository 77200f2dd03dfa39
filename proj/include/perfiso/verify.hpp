#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "perfiso/search.hpp"

namespace perfiso {

struct TargetResult {
  std::string name;
  bool pass = false;
  bool node_limit_hit = false;
  nlohmann::json details;
};

struct VerifyOptions {
  int jobs = 0;                                  // 0 = all threads
  std::optional<unsigned long long> node_limit;
  int prime_factor = -1;                         // -1 = sweep all choices
  // "auto" follows the per-target guards; "exhaustive"/"proof-guided" force
  // a strategy where the guards allow it
  std::string strategy = "auto";
};

/// Self-isometries of O A4: 48 = C2 x S4, exhaustive over 384 candidates.
TargetResult verify_prop24(const VerifyOptions &opt);
/// Self-isometries of O C_{2^n}: 2^{2n}; exhaustive for n <= 3, guided at 4.
TargetResult verify_prop26(int n, const VerifyOptions &opt);
/// Self-isometries of O (C_{2^n} x A4): 2^{2n-1} * 48, guided; exhaustive
/// cross-check at n = 1.
TargetResult verify_thm27(int n, const VerifyOptions &opt);
/// Exhaustive roots-of-unity sweep for n <= nmax, m <= n.
TargetResult verify_lemma_roots(int nmax, const VerifyOptions &opt);
/// Block partitions, defects and (k, l) on the model tables.
TargetResult verify_blocks(const VerifyOptions &opt);
/// Cross isometries between the principal blocks of O A4 and O A5.
TargetResult verify_cross_a4a5(const VerifyOptions &opt);
/// Descent through C_{2^{n-1}} x A4 <= C_{2^n} x A4 plus the sign-twist
/// analysis; n in {1, 2}.
TargetResult verify_descent(int n, const VerifyOptions &opt);
/// Centre isomorphism checks over every enumerated perfect isometry.
TargetResult verify_centres(int nmax, const VerifyOptions &opt);

/// Cached model enumerations shared between targets within one process.
const EnumerationResult &cached_self_a4();
const EnumerationResult &cached_self_cyclic(int n);
const EnumerationResult &cached_self_product(int n); // proof-guided
const EnumerationResult &cached_cross_a4a5(int factor);

} // namespace perfiso

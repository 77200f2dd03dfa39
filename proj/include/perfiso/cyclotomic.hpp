#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "perfiso/intmat.hpp"

#include <nlohmann/json_fwd.hpp>

namespace perfiso {

unsigned long euler_phi(unsigned long n);
long v2_int(const mpz_class &n); // n != 0
unsigned long gcd_ul(unsigned long a, unsigned long b);

/// Coefficients of the M-th cyclotomic polynomial (degree phi(M), monic),
/// index i = coefficient of X^i.  Cached; thread-safe.
const std::vector<mpz_class> &cyclotomic_poly(unsigned long M);

/// An element of Q(zeta_M) in reduced power-basis coordinates
/// 1, zeta, ..., zeta^{phi(M)-1}.  Immutable value type.  Mixed-conductor
/// arithmetic lifts both operands to the least common conductor.
class CycNum {
public:
  CycNum() : conductor_(1), c_(1) {}

  static CycNum integer(long n);
  static CycNum rational(const mpq_class &q);
  /// zeta_M^k, stored at the minimal conductor for its order.
  static CycNum root_of_unity(unsigned long M, long k);
  static CycNum from_coeffs(unsigned long M, std::vector<mpq_class> coeffs);

  unsigned long conductor() const { return conductor_; }
  const std::vector<mpq_class> &coeffs() const { return c_; }

  bool is_zero() const;
  bool is_rational() const;
  mpq_class rational_value() const; // requires is_rational()

  CycNum lifted_to(unsigned long M) const; // conductor() must divide M
  /// Rewrite at the smallest cyclotomic field containing the value.
  CycNum normalized() const;

  CycNum operator-() const;
  friend CycNum operator+(const CycNum &a, const CycNum &b);
  friend CycNum operator-(const CycNum &a, const CycNum &b);
  friend CycNum operator*(const CycNum &a, const CycNum &b);
  CycNum &operator+=(const CycNum &b);
  CycNum &operator-=(const CycNum &b);
  CycNum &operator*=(const CycNum &b);

  /// Multiplicative inverse; throws std::domain_error on zero.
  CycNum inverse() const;
  friend CycNum operator/(const CycNum &a, const CycNum &b);

  /// Galois automorphism zeta -> zeta^j, gcd(j, conductor) = 1.
  CycNum galois(long j) const;
  /// Complex conjugation (zeta -> zeta^{-1}).
  CycNum conjugate() const;
  /// Product of all Galois conjugates; always a rational number.
  mpq_class norm_to_q() const;

  bool operator==(const CycNum &b) const;
  bool operator!=(const CycNum &b) const { return !(*this == b); }

  nlohmann::json to_json() const; // normalized form
  static CycNum from_json(const nlohmann::json &j);
  std::string str() const;

private:
  unsigned long conductor_;
  std::vector<mpq_class> c_; // length phi(conductor_)
};

/// Valuation at the fixed prime over 2; INFINITY encodes v(0).
struct Valuation {
  bool infinite = false;
  long v = 0;

  static Valuation finite(long x) { return {false, x}; }
  static Valuation inf() { return {true, 0}; }

  bool operator==(const Valuation &o) const {
    return infinite == o.infinite && (infinite || v == o.v);
  }
  bool at_least(long t) const { return infinite || v >= t; }
  Valuation operator+(const Valuation &o) const {
    if (infinite || o.infinite) return inf();
    return finite(v + o.v);
  }
};

/// Polynomials over F_2, used for factoring cyclotomic polynomials mod 2.
using F2Poly = std::vector<uint8_t>; // coefficient i = X^i, no trailing zeros

F2Poly f2_mod(const F2Poly &a, const F2Poly &b);
F2Poly f2_mul(const F2Poly &a, const F2Poly &b);
F2Poly f2_gcd(F2Poly a, F2Poly b);
/// Distinct irreducible factors of a squarefree polynomial over F_2
/// (Berlekamp), sorted lexicographically on coefficient bit-strings.
std::vector<F2Poly> f2_factor_squarefree(const F2Poly &h);

/// A chosen prime ideal P over 2 in Z[zeta_M], with ramification data and
/// cached Z-bases of its powers.  Conductors that are twice an odd number are
/// rewritten as the odd number (same field, canonical representation).
///
/// The cache of ideal-power bases grows lazily under a mutex and is safe for
/// concurrent readers.
class PrimeContext {
public:
  explicit PrimeContext(unsigned long M, int which_factor = 0);

  unsigned long conductor() const { return M_; }
  int factor_index() const { return which_; }
  long ram_e() const { return e_; }
  long res_f() const { return f_; }
  long num_primes() const { return g_; }
  const F2Poly &factor_mod2() const { return factor_; }
  unsigned long degree() const { return dim_; } // phi(M)

  /// zeta_{2^a} - 1 (valuation 1) when 2 | M, else 2.
  const CycNum &uniformizer() const { return uniformizer_; }

  /// v_P-normalized valuation of x; conductor of x must divide M.
  Valuation valuation(const CycNum &x) const;
  /// Is v(x) >= k?  Decided by one lattice membership test.
  bool val_at_least(const CycNum &x, long k) const;
  /// x in 2^t O_P, i.e. v(x) >= t*e.
  bool in_scaled_ring(const CycNum &x, long t) const;

  /// Z-basis of P^t (rows, HNF), t >= 0.
  const IntMat &ideal_power_basis(long t) const;

private:
  unsigned long M_;
  unsigned long dim_;
  int which_;
  long e_, f_, g_;
  F2Poly factor_;
  CycNum uniformizer_;
  std::vector<mpz_class> factor_lift_; // power-basis coords of h(zeta)

  mutable std::mutex mu_;
  mutable std::map<long, IntMat> bases_;

  // x = y / den with y integral; fills power-basis integer coords of y
  void integral_parts(const CycNum &x, std::vector<mpz_class> &y,
                      mpz_class &den) const;
};

using CtxPtr = std::shared_ptr<const PrimeContext>;

/// Shared context for the 2-power conductor 2^n (factor is unique).
CtxPtr two_power_context(int n);

/// Number of irreducible factors of Phi_M mod 2, without building a context.
long num_prime_factors_mod2(unsigned long M);

enum class RootSumClass { NOT_IN_IDEAL, ZERO, ALL_EQUAL };

struct LemmaViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Classifies s = sum of 2^m powers of zeta_{2^n} against membership in
/// 2^m O.  A nonzero member with non-equal summands contradicts the
/// roots-of-unity lemma and raises LemmaViolation.
RootSumClass root_sum_classify(int n, int m,
                               const std::vector<long> &exponents);

} // namespace perfiso

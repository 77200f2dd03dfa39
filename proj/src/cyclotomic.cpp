#include "perfiso/cyclotomic.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

namespace perfiso {

using json = nlohmann::json;

unsigned long euler_phi(unsigned long n) {
  unsigned long result = n;
  for (unsigned long p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

long v2_int(const mpz_class &n) {
  assert(n != 0);
  return long(mpz_scan1(n.get_mpz_t(), 0));
}

unsigned long gcd_ul(unsigned long a, unsigned long b) {
  while (b) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

// ---------------------------------------------------------------------------
// cyclotomic polynomials

namespace {

using ZPoly = std::vector<mpz_class>;

// exact division by a monic divisor
ZPoly zpoly_div_exact(const ZPoly &num, const ZPoly &den) {
  assert(den.back() == 1);
  ZPoly r = num;
  int dn = int(r.size()) - 1, dd = int(den.size()) - 1;
  ZPoly q(dn - dd + 1);
  for (int d = dn; d >= dd; --d) {
    mpz_class c = r[d];
    if (c == 0) continue;
    q[d - dd] = c;
    for (int i = 0; i <= dd; ++i) r[d - dd + i] -= c * den[i];
  }
  for (const auto &c : r) assert(c == 0);
  return q;
}

std::mutex g_cyclo_mu;
std::map<unsigned long, ZPoly> g_cyclo;

const ZPoly &cyclotomic_unlocked(unsigned long M) {
  auto it = g_cyclo.find(M);
  if (it != g_cyclo.end()) return it->second;
  ZPoly p;
  if (M == 1) {
    p = {mpz_class(-1), mpz_class(1)}; // X - 1
  } else {
    p.assign(M + 1, mpz_class(0)); // X^M - 1
    p[0] = -1;
    p[M] = 1;
    for (unsigned long d = 1; d < M; ++d)
      if (M % d == 0) p = zpoly_div_exact(p, cyclotomic_unlocked(d));
  }
  return g_cyclo.emplace(M, std::move(p)).first->second;
}

} // namespace

const std::vector<mpz_class> &cyclotomic_poly(unsigned long M) {
  std::lock_guard<std::mutex> lk(g_cyclo_mu);
  return cyclotomic_unlocked(M);
}

// ---------------------------------------------------------------------------
// CycNum

namespace {

// reduce a rational polynomial (any degree) modulo Phi_M, in place; result is
// truncated/padded to length phi(M)
void reduce_mod_phi(std::vector<mpq_class> &p, unsigned long M) {
  const ZPoly &phi = cyclotomic_poly(M);
  size_t dim = phi.size() - 1;
  for (size_t d = p.size(); d-- > dim;) {
    if (p[d] == 0) continue;
    mpq_class c = p[d];
    p[d] = 0;
    for (size_t i = 0; i < dim; ++i) p[d - dim + i] -= c * phi[i];
  }
  p.resize(dim);
}

void reduce_mod_phi_z(std::vector<mpz_class> &p, unsigned long M) {
  const ZPoly &phi = cyclotomic_poly(M);
  size_t dim = phi.size() - 1;
  for (size_t d = p.size(); d-- > dim;) {
    if (p[d] == 0) continue;
    mpz_class c = p[d];
    p[d] = 0;
    for (size_t i = 0; i < dim; ++i) p[d - dim + i] -= c * phi[i];
  }
  p.resize(dim);
}

unsigned long lcm_ul(unsigned long a, unsigned long b) {
  return a / gcd_ul(a, b) * b;
}

// zeta_n^t for gcd(t, n) = 1, at minimal conductor
CycNum zeta_pow_coprime(unsigned long n, unsigned long t) {
  if (n == 1) return CycNum::integer(1);
  if (n == 2) return CycNum::integer(-1);
  if (n % 4 == 2) {
    unsigned long m = n / 2; // odd
    CycNum w = zeta_pow_coprime(m, (t * ((m + 1) / 2)) % m);
    return (t % 2) ? -w : w;
  }
  std::vector<mpq_class> p(t + 1);
  p[t] = 1;
  reduce_mod_phi(p, n);
  return CycNum::from_coeffs(n, std::move(p));
}

} // namespace

CycNum CycNum::integer(long n) {
  CycNum x;
  x.c_[0] = n;
  return x;
}

CycNum CycNum::rational(const mpq_class &q) {
  CycNum x;
  x.c_[0] = q;
  return x;
}

CycNum CycNum::from_coeffs(unsigned long M, std::vector<mpq_class> coeffs) {
  CycNum x;
  x.conductor_ = M;
  reduce_mod_phi(coeffs, M);
  x.c_ = std::move(coeffs);
  return x;
}

CycNum CycNum::root_of_unity(unsigned long M, long k) {
  if (M < 1) throw std::invalid_argument("root_of_unity: conductor < 1");
  unsigned long kk = ((k % long(M)) + long(M)) % long(M);
  if (kk == 0) return integer(1);
  unsigned long g = gcd_ul(M, kk);
  return zeta_pow_coprime(M / g, kk / g);
}

bool CycNum::is_zero() const {
  for (const auto &q : c_)
    if (q != 0) return false;
  return true;
}

bool CycNum::is_rational() const {
  for (size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return false;
  return true;
}

mpq_class CycNum::rational_value() const {
  if (!is_rational())
    throw std::domain_error("rational_value on irrational element");
  return c_[0];
}

CycNum CycNum::lifted_to(unsigned long M) const {
  if (M == conductor_) return *this;
  if (M % conductor_ != 0)
    throw std::invalid_argument("lifted_to: not a multiple of conductor");
  unsigned long step = M / conductor_;
  std::vector<mpq_class> p(euler_phi(conductor_) * step);
  for (size_t i = 0; i < c_.size(); ++i)
    if (c_[i] != 0) {
      size_t e = i * step;
      if (e >= p.size()) p.resize(e + 1);
      p[e] = c_[i];
    }
  return from_coeffs(M, std::move(p));
}

CycNum CycNum::normalized() const {
  CycNum x = *this;
  if (x.is_rational()) {
    CycNum r;
    r.c_[0] = x.c_[0];
    return r;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    unsigned long M = x.conductor_;
    for (unsigned long p = 2; p <= M; ++p) {
      if (M % p != 0) continue;
      bool prime = true;
      for (unsigned long q = 2; q * q <= p; ++q)
        if (p % q == 0) prime = false;
      if (!prime) continue;
      unsigned long m = M / p;
      // solve for coordinates of x over the power basis of zeta_m
      unsigned long dm = euler_phi(m), dM = euler_phi(M);
      if (dm > dM) continue;
      // columns: basis powers of zeta_m lifted to conductor M
      std::vector<std::vector<mpq_class>> col(dm);
      for (unsigned long k = 0; k < dm; ++k) {
        std::vector<mpq_class> q(k * (M / m) + 1);
        q[k * (M / m)] = 1;
        reduce_mod_phi(q, M);
        col[k] = std::move(q);
      }
      // gaussian elimination on the dM x dm system
      std::vector<std::vector<mpq_class>> A(dM,
                                            std::vector<mpq_class>(dm + 1));
      for (unsigned long r = 0; r < dM; ++r) {
        for (unsigned long k = 0; k < dm; ++k) A[r][k] = col[k][r];
        A[r][dm] = x.c_[r];
      }
      unsigned long row = 0;
      std::vector<long> pivot_of_col(dm, -1);
      for (unsigned long ccol = 0; ccol < dm && row < dM; ++ccol) {
        unsigned long sel = row;
        while (sel < dM && A[sel][ccol] == 0) ++sel;
        if (sel == dM) continue;
        std::swap(A[sel], A[row]);
        mpq_class inv = 1 / A[row][ccol];
        for (unsigned long j = ccol; j <= dm; ++j) A[row][j] *= inv;
        for (unsigned long r2 = 0; r2 < dM; ++r2) {
          if (r2 == row || A[r2][ccol] == 0) continue;
          mpq_class f = A[r2][ccol];
          for (unsigned long j = ccol; j <= dm; ++j)
            A[r2][j] -= f * A[row][j];
        }
        pivot_of_col[ccol] = long(row);
        ++row;
      }
      bool consistent = true;
      for (unsigned long r2 = row; r2 < dM; ++r2)
        if (A[r2][dm] != 0) consistent = false;
      if (!consistent) continue;
      std::vector<mpq_class> y(dm);
      for (unsigned long k = 0; k < dm; ++k)
        if (pivot_of_col[k] >= 0) y[k] = A[pivot_of_col[k]][dm];
      x = from_coeffs(m, std::move(y));
      changed = true;
      break;
    }
  }
  return x;
}

CycNum CycNum::operator-() const {
  CycNum r = *this;
  for (auto &q : r.c_) q = -q;
  return r;
}

CycNum operator+(const CycNum &a, const CycNum &b) {
  unsigned long L = lcm_ul(a.conductor_, b.conductor_);
  CycNum x = a.lifted_to(L), y = b.lifted_to(L);
  for (size_t i = 0; i < x.c_.size(); ++i) x.c_[i] += y.c_[i];
  return x;
}

CycNum operator-(const CycNum &a, const CycNum &b) {
  unsigned long L = lcm_ul(a.conductor_, b.conductor_);
  CycNum x = a.lifted_to(L), y = b.lifted_to(L);
  for (size_t i = 0; i < x.c_.size(); ++i) x.c_[i] -= y.c_[i];
  return x;
}

CycNum operator*(const CycNum &a, const CycNum &b) {
  unsigned long L = lcm_ul(a.conductor_, b.conductor_);
  CycNum x = a.lifted_to(L), y = b.lifted_to(L);
  std::vector<mpq_class> conv(x.c_.size() + y.c_.size() - 1);
  for (size_t i = 0; i < x.c_.size(); ++i) {
    if (x.c_[i] == 0) continue;
    for (size_t j = 0; j < y.c_.size(); ++j) {
      if (y.c_[j] == 0) continue;
      conv[i + j] += x.c_[i] * y.c_[j];
    }
  }
  return CycNum::from_coeffs(L, std::move(conv));
}

CycNum &CycNum::operator+=(const CycNum &b) { return *this = *this + b; }
CycNum &CycNum::operator-=(const CycNum &b) { return *this = *this - b; }
CycNum &CycNum::operator*=(const CycNum &b) { return *this = *this * b; }

namespace {

using QPoly = std::vector<mpq_class>;

int qdeg(const QPoly &p) {
  for (int d = int(p.size()) - 1; d >= 0; --d)
    if (p[d] != 0) return d;
  return -1;
}

// long division remainder-and-quotient: a = q*b + r
void qpoly_divmod(const QPoly &a, const QPoly &b, QPoly &q, QPoly &r) {
  int db = qdeg(b);
  assert(db >= 0);
  r = a;
  q.assign(std::max<size_t>(1, a.size()), mpq_class(0));
  for (int d = qdeg(r); d >= db; d = qdeg(r)) {
    mpq_class c = r[d] / b[db];
    q[d - db] = c;
    for (int i = 0; i <= db; ++i) r[d - db + i] -= c * b[i];
  }
}

} // namespace

CycNum CycNum::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero");
  if (is_rational()) return rational(1 / c_[0]);
  // extended euclid against Phi_M; gcd is a nonzero constant
  const ZPoly &phiz = cyclotomic_poly(conductor_);
  QPoly r0(phiz.begin(), phiz.end()), r1 = c_;
  QPoly u0(1, mpq_class(0)), u1(1, mpq_class(1));
  while (qdeg(r1) > 0) {
    QPoly q, r2;
    qpoly_divmod(r0, r1, q, r2);
    // u2 = u0 - q*u1
    QPoly u2(std::max(u0.size(), q.size() + u1.size()), mpq_class(0));
    for (size_t i = 0; i < u0.size(); ++i) u2[i] = u0[i];
    for (size_t i = 0; i < q.size(); ++i) {
      if (q[i] == 0) continue;
      for (size_t j = 0; j < u1.size(); ++j) u2[i + j] -= q[i] * u1[j];
    }
    r0 = std::move(r1);
    r1 = std::move(r2);
    u0 = std::move(u1);
    u1 = std::move(u2);
  }
  assert(qdeg(r1) == 0);
  mpq_class lead = r1[0];
  for (auto &q : u1) q /= lead;
  return from_coeffs(conductor_, std::move(u1));
}

CycNum operator/(const CycNum &a, const CycNum &b) { return a * b.inverse(); }

CycNum CycNum::galois(long j) const {
  unsigned long M = conductor_;
  unsigned long jj = ((j % long(M)) + long(M)) % long(M);
  if (M == 1) return *this;
  if (gcd_ul(jj, M) != 1)
    throw std::invalid_argument("galois: exponent not coprime to conductor");
  std::vector<mpq_class> p(M);
  for (size_t i = 0; i < c_.size(); ++i)
    if (c_[i] != 0) p[(i * jj) % M] += c_[i];
  return from_coeffs(M, std::move(p));
}

CycNum CycNum::conjugate() const { return galois(-1); }

mpq_class CycNum::norm_to_q() const {
  CycNum prod = CycNum::integer(1);
  unsigned long M = conductor_;
  for (unsigned long j = 1; j <= M; ++j)
    if (gcd_ul(j, M) == 1) prod *= galois(long(j));
  if (!prod.is_rational())
    throw std::logic_error("norm did not land in Q");
  return prod.rational_value();
}

bool CycNum::operator==(const CycNum &b) const {
  if (conductor_ == b.conductor_) return c_ == b.c_;
  unsigned long L = lcm_ul(conductor_, b.conductor_);
  return lifted_to(L).c_ == b.lifted_to(L).c_;
}

nlohmann::json CycNum::to_json() const {
  CycNum n = normalized();
  json coeffs = json::array();
  for (const auto &q : n.c_) {
    json pair = json::array();
    mpz_class num = q.get_num(), den = q.get_den();
    if (num.fits_slong_p())
      pair.push_back((int64_t)num.get_si());
    else
      pair.push_back(num.get_str());
    if (den.fits_slong_p())
      pair.push_back((int64_t)den.get_si());
    else
      pair.push_back(den.get_str());
    coeffs.push_back(pair);
  }
  return json{{"conductor", n.conductor_}, {"coeffs", coeffs}};
}

CycNum CycNum::from_json(const nlohmann::json &j) {
  unsigned long M = j.at("conductor").get<unsigned long>();
  std::vector<mpq_class> coeffs;
  for (const auto &pair : j.at("coeffs")) {
    mpz_class num, den;
    if (pair.at(0).is_string())
      num = mpz_class(pair.at(0).get<std::string>());
    else
      num = mpz_class((long)pair.at(0).get<int64_t>());
    if (pair.at(1).is_string())
      den = mpz_class(pair.at(1).get<std::string>());
    else
      den = mpz_class((long)pair.at(1).get<int64_t>());
    mpq_class q(num, den);
    q.canonicalize();
    coeffs.push_back(q);
  }
  if (coeffs.size() != euler_phi(M))
    throw std::invalid_argument("CycNum json: wrong coefficient count");
  return from_coeffs(M, std::move(coeffs));
}

std::string CycNum::str() const {
  CycNum n = normalized();
  if (n.is_rational()) return n.c_[0].get_str();
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < n.c_.size(); ++i) {
    if (n.c_[i] == 0) continue;
    if (!first) os << " + ";
    os << n.c_[i].get_str();
    if (i > 0) os << "*z" << n.conductor_ << "^" << i;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

// ---------------------------------------------------------------------------
// F2 polynomial arithmetic and Berlekamp factorization

namespace {
void f2_trim(F2Poly &p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}
int f2_deg(const F2Poly &p) { return int(p.size()) - 1; }
} // namespace

F2Poly f2_mul(const F2Poly &a, const F2Poly &b) {
  if (a.empty() || b.empty()) return {};
  F2Poly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i])
      for (size_t j = 0; j < b.size(); ++j) r[i + j] ^= (a[i] & b[j]);
  f2_trim(r);
  return r;
}

F2Poly f2_mod(const F2Poly &a, const F2Poly &b) {
  F2Poly r = a;
  f2_trim(r);
  int db = f2_deg(b);
  assert(db >= 0);
  while (f2_deg(r) >= db) {
    int shift = f2_deg(r) - db;
    for (int i = 0; i <= db; ++i) r[i + shift] ^= b[i];
    f2_trim(r);
  }
  return r;
}

F2Poly f2_gcd(F2Poly a, F2Poly b) {
  f2_trim(a);
  f2_trim(b);
  while (!b.empty()) {
    F2Poly r = f2_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

std::vector<F2Poly> f2_factor_squarefree(const F2Poly &h_in) {
  F2Poly h = h_in;
  f2_trim(h);
  int n = f2_deg(h);
  assert(n >= 1);
  if (n == 1) return {h};

  // Berlekamp Q-matrix: row i = X^{2i} mod h
  std::vector<F2Poly> qrow(n);
  {
    F2Poly cur = {1}; // X^0
    F2Poly x2 = f2_mod(F2Poly{0, 0, 1}, h);
    for (int i = 0; i < n; ++i) {
      qrow[i] = cur;
      qrow[i].resize(n, 0);
      cur = f2_mod(f2_mul(cur, x2), h);
    }
  }
  // left nullspace of (Q - I)
  std::vector<std::vector<uint8_t>> m(n, std::vector<uint8_t>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[i][j] = qrow[i][j] ^ (i == j ? 1 : 0);
  std::vector<std::vector<uint8_t>> id(n, std::vector<uint8_t>(n, 0));
  for (int i = 0; i < n; ++i) id[i][i] = 1;
  int row = 0;
  for (int col = 0; col < n && row < n; ++col) {
    int sel = -1;
    for (int i = row; i < n; ++i)
      if (m[i][col]) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    std::swap(m[sel], m[row]);
    std::swap(id[sel], id[row]);
    for (int i = 0; i < n; ++i) {
      if (i == row || !m[i][col]) continue;
      for (int j = 0; j < n; ++j) m[i][j] ^= m[row][j];
      for (int j = 0; j < n; ++j) id[i][j] ^= id[row][j];
    }
    ++row;
  }
  std::vector<F2Poly> basis;
  for (int i = row; i < n; ++i) {
    F2Poly v(id[i].begin(), id[i].end());
    f2_trim(v);
    basis.push_back(v);
  }
  size_t r = basis.size() + 0; // rank-nullity; constants live in the kernel
  // the all-ones idempotent v = 1 is always in the kernel; count it
  size_t nfactors = n - row;
  if (nfactors <= 1) return {h};

  std::vector<F2Poly> factors = {h};
  for (const F2Poly &v : basis) {
    if (factors.size() >= nfactors) break;
    for (int c = 0; c <= 1 && factors.size() < nfactors; ++c) {
      F2Poly vc = v;
      if (c) {
        if (vc.empty()) vc = {1};
        else vc[0] ^= 1;
        f2_trim(vc);
      }
      std::vector<F2Poly> next;
      for (const F2Poly &f : factors) {
        if (f2_deg(f) <= 1) {
          next.push_back(f);
          continue;
        }
        F2Poly g = f2_gcd(f, f2_mod(vc, f));
        if (f2_deg(g) <= 0 || f2_deg(g) == f2_deg(f)) {
          next.push_back(f);
        } else {
          // split f = g * (f/g)
          F2Poly q = f;
          // division f / g over F2
          F2Poly quot(f.size(), 0);
          F2Poly rem = f;
          int dg = f2_deg(g);
          while (f2_deg(rem) >= dg) {
            int shift = f2_deg(rem) - dg;
            quot[shift] ^= 1;
            for (int i = 0; i <= dg; ++i) rem[i + shift] ^= g[i];
            f2_trim(rem);
          }
          f2_trim(quot);
          assert(rem.empty());
          next.push_back(g);
          next.push_back(quot);
        }
      }
      factors = std::move(next);
    }
  }
  (void)r;
  assert(factors.size() == nfactors);
  std::sort(factors.begin(), factors.end(),
            [](const F2Poly &a, const F2Poly &b) {
              if (a.size() != b.size()) return a.size() < b.size();
              for (size_t i = 0; i < a.size(); ++i)
                if (a[i] != b[i]) return a[i] < b[i];
              return false;
            });
  return factors;
}

// ---------------------------------------------------------------------------
// PrimeContext

PrimeContext::PrimeContext(unsigned long M, int which_factor) {
  if (M < 1) throw std::invalid_argument("PrimeContext: conductor < 1");
  if (M % 4 == 2) M /= 2;
  M_ = M;
  dim_ = euler_phi(M);
  unsigned long a = 0, modd = M;
  while (modd % 2 == 0) {
    modd /= 2;
    ++a;
  }
  e_ = long(a == 0 ? 1 : euler_phi(1UL << a));

  // Phi_modd mod 2 is squarefree; its irreducible factors are the
  // irreducible factors of Phi_M mod 2 (each with multiplicity e)
  const ZPoly &phi_odd = cyclotomic_poly(modd);
  F2Poly hbar(phi_odd.size());
  for (size_t i = 0; i < phi_odd.size(); ++i)
    hbar[i] = uint8_t(mpz_class(phi_odd[i] % 2 + 2).get_ui() % 2);
  std::vector<F2Poly> factors = f2_factor_squarefree(hbar);
  g_ = long(factors.size());
  f_ = long(factors[0].size()) - 1;
  for (const auto &fac : factors)
    if (long(fac.size()) - 1 != f_)
      throw std::logic_error("cyclotomic factors of unequal degree");
  if (e_ * f_ * g_ != long(dim_))
    throw std::logic_error("ramification bookkeeping failed");
  if (which_factor < 0 || which_factor >= int(g_))
    throw std::out_of_range("PrimeContext: factor index out of range");
  which_ = which_factor;
  factor_ = factors[which_factor];

  // lift of the chosen factor evaluated at zeta_M
  std::vector<mpz_class> lift(factor_.size());
  for (size_t i = 0; i < factor_.size(); ++i) lift[i] = long(factor_[i]);
  reduce_mod_phi_z(lift, M_);
  factor_lift_ = std::move(lift);

  if (a >= 1)
    uniformizer_ = CycNum::root_of_unity(1UL << a, 1) - CycNum::integer(1);
  else
    uniformizer_ = CycNum::integer(2);

  // P^0 = Z[zeta]; P^1 from the generators 2 and h(zeta)
  bases_.emplace(0, IntMat::identity(int(dim_)));
  IntMat gen(0, 0);
  for (unsigned long i = 0; i < dim_; ++i) {
    std::vector<mpz_class> row(dim_);
    row[i] = 2;
    gen.append_row(row);
  }
  for (unsigned long i = 0; i < dim_; ++i) {
    std::vector<mpz_class> row(dim_ + factor_lift_.size());
    for (size_t j = 0; j < factor_lift_.size(); ++j)
      row[i + j] = factor_lift_[j];
    reduce_mod_phi_z(row, M_);
    gen.append_row(row);
  }
  bases_.emplace(1, hnf(gen));
}

const IntMat &PrimeContext::ideal_power_basis(long t) const {
  if (t < 0) throw std::invalid_argument("ideal power < 0");
  std::lock_guard<std::mutex> lk(mu_);
  auto it = bases_.find(t);
  if (it != bases_.end()) return it->second;
  long have = bases_.rbegin()->first;
  while (have < t) {
    const IntMat &prev = bases_.at(have);
    IntMat gen(0, 0);
    for (int r = 0; r < prev.rows(); ++r) {
      std::vector<mpz_class> two_row(dim_);
      for (unsigned long j = 0; j < dim_; ++j) two_row[j] = 2 * prev.at(r, j);
      gen.append_row(two_row);
      // multiply the basis row by h(zeta)
      std::vector<mpz_class> conv(dim_ + factor_lift_.size());
      for (unsigned long i = 0; i < dim_; ++i) {
        if (prev.at(r, i) == 0) continue;
        for (size_t j = 0; j < factor_lift_.size(); ++j)
          conv[i + j] += prev.at(r, i) * factor_lift_[j];
      }
      reduce_mod_phi_z(conv, M_);
      gen.append_row(conv);
    }
    ++have;
    bases_.emplace(have, hnf(gen));
  }
  return bases_.at(t);
}

void PrimeContext::integral_parts(const CycNum &x, std::vector<mpz_class> &y,
                                  mpz_class &den) const {
  if (M_ % x.conductor() != 0)
    throw std::invalid_argument("value conductor does not divide context");
  CycNum lifted = x.lifted_to(M_);
  den = 1;
  for (const auto &q : lifted.coeffs())
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den().get_mpz_t());
  y.resize(dim_);
  for (unsigned long i = 0; i < dim_; ++i) {
    mpq_class scaled = lifted.coeffs()[i] * den;
    assert(scaled.get_den() == 1);
    y[i] = scaled.get_num();
  }
}

Valuation PrimeContext::valuation(const CycNum &x) const {
  if (x.is_zero()) return Valuation::inf();
  std::vector<mpz_class> y;
  mpz_class den;
  integral_parts(x, y, den);
  long dshift = e_ * v2_int(den);
  // strip integer 2-content first
  long content = -1;
  for (const auto &z : y)
    if (z != 0) {
      long v = v2_int(z);
      content = (content < 0) ? v : std::min(content, v);
    }
  if (content > 0) {
    mpz_class pw;
    mpz_ui_pow_ui(pw.get_mpz_t(), 2, content);
    for (auto &z : y) z /= pw;
  } else {
    content = 0;
  }
  long t = 1;
  while (in_row_lattice(ideal_power_basis(t), y)) ++t;
  return Valuation::finite(content * e_ + (t - 1) - dshift);
}

bool PrimeContext::val_at_least(const CycNum &x, long k) const {
  if (x.is_zero()) return true;
  std::vector<mpz_class> y;
  mpz_class den;
  integral_parts(x, y, den);
  long target = k + e_ * v2_int(den);
  if (target <= 0) return true;
  long content = -1;
  for (const auto &z : y)
    if (z != 0) {
      long v = v2_int(z);
      content = (content < 0) ? v : std::min(content, v);
    }
  if (content > 0) {
    target -= content * e_;
    if (target <= 0) return true;
    mpz_class pw;
    mpz_ui_pow_ui(pw.get_mpz_t(), 2, content);
    for (auto &z : y) z /= pw;
  }
  return in_row_lattice(ideal_power_basis(target), y);
}

bool PrimeContext::in_scaled_ring(const CycNum &x, long t) const {
  return val_at_least(x, t * e_);
}

std::shared_ptr<const PrimeContext> two_power_context(int n) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const PrimeContext>> cache;
  std::lock_guard<std::mutex> lk(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto ctx = std::make_shared<const PrimeContext>(1UL << n, 0);
  cache.emplace(n, ctx);
  return ctx;
}

long num_prime_factors_mod2(unsigned long M) {
  if (M % 4 == 2) M /= 2;
  unsigned long modd = M;
  while (modd % 2 == 0) modd /= 2;
  const ZPoly &phi_odd = cyclotomic_poly(modd);
  F2Poly hbar(phi_odd.size());
  for (size_t i = 0; i < phi_odd.size(); ++i)
    hbar[i] = uint8_t(mpz_class(phi_odd[i] % 2 + 2).get_ui() % 2);
  return long(f2_factor_squarefree(hbar).size());
}

// ---------------------------------------------------------------------------
// roots-of-unity lemma

RootSumClass root_sum_classify(int n, int m,
                               const std::vector<long> &exponents) {
  if (n < 1 || m < 1) throw std::invalid_argument("root_sum_classify: n,m >= 1");
  if (exponents.size() != (size_t(1) << m))
    throw std::invalid_argument("root_sum_classify: need 2^m exponents");
  unsigned long M = 1UL << n;
  auto ctx = two_power_context(n);

  CycNum s;
  bool all_equal = true;
  long l0 = ((exponents[0] % long(M)) + long(M)) % long(M);
  if (n == 1) {
    long acc = 0;
    for (long l : exponents) {
      long ll = ((l % 2) + 2) % 2;
      acc += ll ? -1 : 1;
      if (ll != l0) all_equal = false;
    }
    s = CycNum::integer(acc);
  } else {
    unsigned long half = M / 2;
    std::vector<mpq_class> coeffs(half);
    for (long l : exponents) {
      unsigned long ll = ((l % long(M)) + long(M)) % long(M);
      if (long(ll) != l0) all_equal = false;
      if (ll < half)
        coeffs[ll] += 1;
      else
        coeffs[ll - half] -= 1;
    }
    s = CycNum::from_coeffs(M, std::move(coeffs));
  }

  if (!ctx->in_scaled_ring(s, m)) return RootSumClass::NOT_IN_IDEAL;
  if (s.is_zero()) return RootSumClass::ZERO;
  if (all_equal) return RootSumClass::ALL_EQUAL;
  throw LemmaViolation("nonzero sum of distinct roots in 2^m O");
}

} // namespace perfiso

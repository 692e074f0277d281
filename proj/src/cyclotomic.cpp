#include "phylotoric/cyclotomic.hpp"

#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace phylotoric {

namespace {

using Poly = std::vector<mpz_class>;

void trim(Poly& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

// Exact long division by a monic polynomial; the remainder must vanish.
Poly divide_monic(const Poly& num, const Poly& den) {
  Poly rem = num;
  const std::size_t dd = den.size() - 1;
  if (rem.size() < den.size()) throw std::logic_error("divide_monic: degree too small");
  Poly quot(rem.size() - dd, 0);
  for (std::size_t k = rem.size(); k-- > dd;) {
    const mpz_class c = rem[k];
    if (c == 0) continue;
    quot[k - dd] = c;
    for (std::size_t j = 0; j <= dd; ++j) rem[k - dd + j] -= c * den[j];
  }
  for (const auto& r : rem)
    if (r != 0) throw std::logic_error("divide_monic: nonzero remainder");
  trim(quot);
  return quot;
}

Poly compute_cyclotomic(unsigned m) {
  Poly p(m + 1, 0);
  p[0] = -1;
  p[m] = 1;
  for (unsigned d = 1; d < m; ++d)
    if (m % d == 0) p = divide_monic(p, cyclotomic_polynomial(d));
  return p;
}

// Reduce a polynomial in place modulo Phi_m and pad it to exactly deg Phi_m terms.
void reduce(Poly& p, const Poly& phi) {
  const std::size_t deg = phi.size() - 1;
  for (std::size_t k = p.size(); k-- > deg;) {
    const mpz_class c = p[k];
    if (c == 0) continue;
    for (std::size_t j = 0; j <= deg; ++j) p[k - deg + j] -= c * phi[j];
  }
  p.resize(deg, 0);
}

}  // namespace

const std::vector<mpz_class>& cyclotomic_polynomial(unsigned m) {
  if (m == 0) throw std::invalid_argument("cyclotomic_polynomial: m must be positive");
  static std::mutex mutex;
  static std::map<unsigned, Poly> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(m); it != cache.end()) return it->second;
  }
  // Computed outside the lock: the recursion re-enters for divisors of m.
  Poly p = compute_cyclotomic(m);
  std::lock_guard lock(mutex);
  return cache.try_emplace(m, std::move(p)).first->second;
}

unsigned euler_phi(unsigned m) {
  unsigned result = m;
  unsigned n = m;
  for (unsigned p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

CyclotomicInt::CyclotomicInt(long value) : order_(1), coeffs_{mpz_class(value)} {}

CyclotomicInt::CyclotomicInt(const mpz_class& value) : order_(1), coeffs_{value} {}

CyclotomicInt::CyclotomicInt(unsigned order, std::vector<mpz_class> coeffs)
    : order_(order), coeffs_(std::move(coeffs)) {
  normalize_integer();
}

void CyclotomicInt::normalize_integer() {
  if (order_ <= 2) {
    // Z[zeta_2] = Z; Phi_2 = x + 1 already reduced the coefficients to one.
    order_ = 1;
    coeffs_.resize(1, 0);
  }
}

CyclotomicInt CyclotomicInt::root_of_unity(unsigned m, long k) {
  if (m == 0) throw std::invalid_argument("root_of_unity: order must be positive");
  const long e = ((k % static_cast<long>(m)) + m) % m;
  if (m <= 2) return CyclotomicInt(e == 0 ? 1 : -1);
  Poly p(static_cast<std::size_t>(e) + 1, 0);
  p[e] = 1;
  reduce(p, cyclotomic_polynomial(m));
  return CyclotomicInt(m, std::move(p));
}

CyclotomicInt CyclotomicInt::from_coefficients(unsigned m, std::vector<mpz_class> coeffs) {
  if (m == 0) throw std::invalid_argument("from_coefficients: order must be positive");
  if (coeffs.empty()) coeffs.push_back(0);
  reduce(coeffs, cyclotomic_polynomial(m));
  return CyclotomicInt(m, std::move(coeffs));
}

bool CyclotomicInt::is_zero() const {
  for (const auto& c : coeffs_)
    if (c != 0) return false;
  return true;
}

bool CyclotomicInt::is_integer() const {
  for (std::size_t i = 1; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0) return false;
  return true;
}

mpz_class CyclotomicInt::to_integer() const {
  if (!is_integer()) throw std::domain_error("CyclotomicInt is not a rational integer: " + to_string());
  return coeffs_.front();
}

CyclotomicInt CyclotomicInt::conjugate() const {
  if (order_ == 1) return *this;
  Poly out(order_, 0);
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    if (coeffs_[j] == 0) continue;
    out[(order_ - j) % order_] += coeffs_[j];
  }
  reduce(out, cyclotomic_polynomial(order_));
  return CyclotomicInt(order_, std::move(out));
}

unsigned CyclotomicInt::common_order(unsigned a, unsigned b) {
  if (a == 1) return b;
  if (b == 1 || a == b) return a;
  throw std::invalid_argument("CyclotomicInt: mixing orders " + std::to_string(a) + " and " +
                              std::to_string(b));
}

void CyclotomicInt::lift_to(unsigned order) {
  if (order == order_) return;
  // Only plain integers are ever lifted.
  coeffs_.resize(euler_phi(order), 0);
  order_ = order;
}

CyclotomicInt& CyclotomicInt::operator+=(const CyclotomicInt& rhs) {
  const unsigned order = common_order(order_, rhs.order_);
  lift_to(order);
  if (rhs.order_ == order) {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  } else {
    coeffs_[0] += rhs.coeffs_[0];
  }
  return *this;
}

CyclotomicInt& CyclotomicInt::operator-=(const CyclotomicInt& rhs) {
  const unsigned order = common_order(order_, rhs.order_);
  lift_to(order);
  if (rhs.order_ == order) {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  } else {
    coeffs_[0] -= rhs.coeffs_[0];
  }
  return *this;
}

CyclotomicInt& CyclotomicInt::operator*=(const CyclotomicInt& rhs) {
  const unsigned order = common_order(order_, rhs.order_);
  if (rhs.order_ == 1) {
    for (auto& c : coeffs_) c *= rhs.coeffs_[0];
    return *this;
  }
  if (order_ == 1) {
    const mpz_class scale = coeffs_[0];
    *this = rhs;
    for (auto& c : coeffs_) c *= scale;
    return *this;
  }
  Poly prod(coeffs_.size() + rhs.coeffs_.size() - 1, 0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) prod[i + j] += coeffs_[i] * rhs.coeffs_[j];
  }
  reduce(prod, cyclotomic_polynomial(order));
  coeffs_ = std::move(prod);
  return *this;
}

CyclotomicInt CyclotomicInt::divided_exactly(const mpz_class& divisor) const {
  if (divisor == 0) throw std::domain_error("CyclotomicInt: division by zero");
  CyclotomicInt out = *this;
  for (auto& c : out.coeffs_) {
    if (!mpz_divisible_p(c.get_mpz_t(), divisor.get_mpz_t()))
      throw std::domain_error("CyclotomicInt: inexact division of " + to_string());
    mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), divisor.get_mpz_t());
  }
  return out;
}

CyclotomicInt CyclotomicInt::operator-() const {
  CyclotomicInt out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

bool operator==(const CyclotomicInt& a, const CyclotomicInt& b) {
  if (a.order_ == b.order_) return a.coeffs_ == b.coeffs_;
  if (a.order_ != 1 && b.order_ != 1) return false;
  const CyclotomicInt& integer = a.order_ == 1 ? a : b;
  const CyclotomicInt& other = a.order_ == 1 ? b : a;
  return other.is_integer() && other.coeffs_[0] == integer.coeffs_[0];
}

std::string CyclotomicInt::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const mpz_class& c = coeffs_[i];
    if (c == 0) continue;
    mpz_class mag = abs(c);
    if (first) {
      if (c < 0) os << '-';
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (i == 0) {
      os << mag;
      continue;
    }
    if (mag != 1) os << mag << '*';
    os << 'z';
    if (i > 1) os << '^' << i;
  }
  if (first) os << '0';
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const CyclotomicInt& value) { return os << value.to_string(); }

}  // namespace phylotoric

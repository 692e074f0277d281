#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <string>
#include <vector>

namespace phylotoric {

/// Coefficients of the m-th cyclotomic polynomial, lowest degree first.
/// Computed once per m as (x^m - 1) / prod_{d | m, d < m} Phi_d(x) and cached.
const std::vector<mpz_class>& cyclotomic_polynomial(unsigned m);

/// Euler's totient, i.e. the degree of Phi_m.
unsigned euler_phi(unsigned m);

/// Exact element of Z[zeta_m] stored as a coefficient vector modulo Phi_m,
/// with zeta_m represented by the class of x.
///
/// Orders 1 and 2 both give Z itself. Elements of Z mix freely with any
/// other order; two elements with distinct orders > 2 cannot be combined.
class CyclotomicInt {
public:
  CyclotomicInt() : CyclotomicInt(0) {}
  CyclotomicInt(long value);  // NOLINT(google-explicit-constructor)
  CyclotomicInt(const mpz_class& value);  // NOLINT(google-explicit-constructor)

  /// zeta_m^k for any integer k.
  static CyclotomicInt root_of_unity(unsigned m, long k);

  /// Builds an element from raw coefficients (reduced modulo Phi_m).
  static CyclotomicInt from_coefficients(unsigned m, std::vector<mpz_class> coeffs);

  /// Order of the root of unity this element lives over; 1 for plain integers.
  unsigned order() const noexcept { return order_; }
  const std::vector<mpz_class>& coefficients() const noexcept { return coeffs_; }

  bool is_zero() const;
  bool is_integer() const;
  /// Value as an integer; throws std::domain_error unless is_integer().
  mpz_class to_integer() const;

  /// Image under zeta -> zeta^{-1} (complex conjugation).
  CyclotomicInt conjugate() const;

  CyclotomicInt& operator+=(const CyclotomicInt& rhs);
  CyclotomicInt& operator-=(const CyclotomicInt& rhs);
  CyclotomicInt& operator*=(const CyclotomicInt& rhs);

  /// Exact division by a rational integer; throws std::domain_error if the
  /// quotient is not in Z[zeta].
  CyclotomicInt divided_exactly(const mpz_class& divisor) const;

  friend CyclotomicInt operator+(CyclotomicInt lhs, const CyclotomicInt& rhs) { return lhs += rhs; }
  friend CyclotomicInt operator-(CyclotomicInt lhs, const CyclotomicInt& rhs) { return lhs -= rhs; }
  friend CyclotomicInt operator*(CyclotomicInt lhs, const CyclotomicInt& rhs) { return lhs *= rhs; }
  CyclotomicInt operator-() const;

  friend bool operator==(const CyclotomicInt& a, const CyclotomicInt& b);
  friend bool operator!=(const CyclotomicInt& a, const CyclotomicInt& b) { return !(a == b); }

  /// Renders as a polynomial in z, e.g. "1 + 2*z - z^2"; plain integers print bare.
  std::string to_string() const;

private:
  CyclotomicInt(unsigned order, std::vector<mpz_class> coeffs);

  void lift_to(unsigned order);
  static unsigned common_order(unsigned a, unsigned b);
  void normalize_integer();

  unsigned order_ = 1;
  std::vector<mpz_class> coeffs_;
};

std::ostream& operator<<(std::ostream& os, const CyclotomicInt& value);

}  // namespace phylotoric

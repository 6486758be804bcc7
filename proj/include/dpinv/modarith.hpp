#pragma once

/// \file modarith.hpp
/// Exact arithmetic modulo a prime p and the p-adic combinatorics
/// (Lucas, Legendre) underlying all divided-power coefficients.
///
/// Quantities of the shape (ij)!/((j!)^i i!) are never materialised as
/// integers; only p-adic valuations and unit parts mod p are computed,
/// so no operation here can overflow for desk-scale inputs.

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace dpinv {

using Residue = std::uint32_t; // value in [0, p)

/// Prime modulus carried explicitly through all computations.
/// One process may work with several primes at once.
class PrimeCtx {
 public:
  explicit PrimeCtx(std::uint32_t p) : p_(p) {
    if (p < 2) throw std::invalid_argument("PrimeCtx: modulus must be >= 2");
    for (std::uint64_t d = 2; d * d <= p; ++d)
      if (p % d == 0) throw std::invalid_argument("PrimeCtx: modulus must be prime");
    if (p > (1u << 20)) throw std::invalid_argument("PrimeCtx: modulus too large");
    fact_.resize(p);
    fact_[0] = 1 % p;
    for (std::uint32_t i = 1; i < p; ++i)
      fact_[i] = static_cast<Residue>(static_cast<std::uint64_t>(fact_[i - 1]) * i % p);
  }

  std::uint32_t p() const { return p_; }

  Residue reduce(std::int64_t a) const {
    std::int64_t r = a % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return static_cast<Residue>(r);
  }

  Residue add(Residue a, Residue b) const {
    Residue s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Residue sub(Residue a, Residue b) const { return a >= b ? a - b : a + p_ - b; }
  Residue neg(Residue a) const { return a == 0 ? 0 : p_ - a; }
  Residue mul(Residue a, Residue b) const {
    return static_cast<Residue>(static_cast<std::uint64_t>(a) * b % p_);
  }

  Residue pow(Residue a, std::uint64_t e) const {
    Residue r = 1 % p_, base = a;
    while (e) {
      if (e & 1) r = mul(r, base);
      base = mul(base, base);
      e >>= 1;
    }
    return r;
  }

  Residue inv(Residue a) const {
    if (a == 0) throw std::domain_error("PrimeCtx::inv: zero is not invertible");
    return pow(a, p_ - 2); // Fermat
  }

  /// a! mod p for 0 <= a < p (unit, since a < p).
  Residue small_factorial(std::uint32_t a) const { return fact_.at(a); }

  bool operator==(const PrimeCtx& o) const { return p_ == o.p_; }
  bool operator!=(const PrimeCtx& o) const { return p_ != o.p_; }

 private:
  std::uint32_t p_;
  std::vector<Residue> fact_; // i! mod p for i < p
};

/// Least-significant-first p-adic digits; no trailing zeros, so 0 <-> [].
struct PAdicDigits {
  std::vector<std::uint32_t> digits;

  std::uint64_t value(const PrimeCtx& ctx) const {
    std::uint64_t v = 0;
    for (std::size_t i = digits.size(); i-- > 0;) v = v * ctx.p() + digits[i];
    return v;
  }
};

inline PAdicDigits p_adic_digits(std::uint64_t a, const PrimeCtx& ctx) {
  PAdicDigits d;
  while (a) {
    d.digits.push_back(static_cast<std::uint32_t>(a % ctx.p()));
    a /= ctx.p();
  }
  return d;
}

inline std::uint64_t p_adic_digit_sum(std::uint64_t a, const PrimeCtx& ctx) {
  std::uint64_t s = 0;
  while (a) {
    s += a % ctx.p();
    a /= ctx.p();
  }
  return s;
}

/// binom(a, b) mod p, digit by digit (Lucas). b > a gives 0.
inline Residue binom_mod_p(std::uint64_t a, std::uint64_t b, const PrimeCtx& ctx) {
  if (b > a) return 0;
  Residue r = ctx.reduce(1);
  while (a || b) {
    std::uint32_t ai = static_cast<std::uint32_t>(a % ctx.p());
    std::uint32_t bi = static_cast<std::uint32_t>(b % ctx.p());
    if (bi > ai) return 0;
    // binom(ai, bi) mod p with ai, bi < p: all factorials are units.
    Residue num = ctx.small_factorial(ai);
    Residue den = ctx.mul(ctx.small_factorial(bi), ctx.small_factorial(ai - bi));
    r = ctx.mul(r, ctx.mul(num, ctx.inv(den)));
    a /= ctx.p();
    b /= ctx.p();
  }
  return r;
}

/// nu_p(a!) = (a - s_p(a)) / (p - 1)  (Legendre).
inline std::uint64_t nu_p_factorial(std::uint64_t a, const PrimeCtx& ctx) {
  return (a - p_adic_digit_sum(a, ctx)) / (ctx.p() - 1);
}

/// The unit q mod p in a! = q * p^{nu_p(a!)}.
///
/// Wilson-style block product over p-adic levels:
///   unit(a) = (-1)^{floor(a/p)} * (a mod p)! * unit(floor(a/p)).
inline Residue factorial_unit_mod_p(std::uint64_t a, const PrimeCtx& ctx) {
  Residue r = ctx.reduce(1);
  while (a) {
    std::uint64_t q = a / ctx.p();
    r = ctx.mul(r, ctx.small_factorial(static_cast<std::uint32_t>(a % ctx.p())));
    if (q & 1) r = ctx.neg(r);
    a = q;
  }
  return r;
}

/// a! mod p itself: zero as soon as a >= p.
inline Residue factorial_mod_p(std::uint64_t a, const PrimeCtx& ctx) {
  if (a >= ctx.p()) return 0;
  return ctx.small_factorial(static_cast<std::uint32_t>(a));
}

/// Valuation/unit pair of a product of factorial powers, kept separately.
struct FactorialQuotient {
  std::int64_t valuation = 0;
  Residue unit;

  explicit FactorialQuotient(const PrimeCtx& ctx) : unit(ctx.reduce(1)) {}

  void mul_factorial(std::uint64_t a, std::int64_t power, const PrimeCtx& ctx) {
    if (a <= 1 || power == 0) return;
    valuation += power * static_cast<std::int64_t>(nu_p_factorial(a, ctx));
    Residue u = factorial_unit_mod_p(a, ctx);
    if (power < 0) {
      u = ctx.inv(u);
      power = -power;
    }
    unit = ctx.mul(unit, ctx.pow(u, static_cast<std::uint64_t>(power)));
  }

  /// The represented quantity reduced mod p (0 unless valuation == 0;
  /// negative valuation means the quotient was not integral).
  Residue residue(const PrimeCtx& ctx) const {
    if (valuation < 0) throw std::domain_error("FactorialQuotient: non-integral quotient");
    return valuation > 0 ? 0 : unit;
  }
};

/// Coefficient of the composition of divided powers:
///   gamma_i(gamma_j(x)) = (ij)!/((j!)^i i!) * gamma_{ij}(x),
/// with i the outer and j the inner index.  Zero exactly when
/// nu_p((ij)!) exceeds i*nu_p(j!) + nu_p(i!).
/// Requires j >= 1 unless i <= 1: gamma_i(gamma_0(x)) = gamma_i(1) is
/// outside the domain of gamma_i.
inline Residue gamma_compose_coeff(std::uint64_t i, std::uint64_t j, const PrimeCtx& ctx) {
  if (i == 0) return ctx.reduce(1);
  if (j == 0 && i >= 2)
    throw std::domain_error("gamma_compose_coeff: inner index 0 with outer index >= 2");
  FactorialQuotient q(ctx);
  q.mul_factorial(i * j, 1, ctx);
  q.mul_factorial(j, -static_cast<std::int64_t>(i), ctx);
  q.mul_factorial(i, -1, ctx);
  return q.residue(ctx);
}

/// Coefficient of the plain power of a divided power:
///   (x^{(t)})^j = (jt)!/(t!)^j * x^{(jt)}.
inline Residue divided_power_pow_coeff(std::uint64_t j, std::uint64_t t, const PrimeCtx& ctx) {
  FactorialQuotient q(ctx);
  q.mul_factorial(j * t, 1, ctx);
  q.mul_factorial(t, -static_cast<std::int64_t>(j), ctx);
  return q.residue(ctx);
}

/// Multinomial coefficient (sum parts)! / prod parts! mod p.
inline Residue multinomial_mod_p(const std::vector<std::uint64_t>& parts, const PrimeCtx& ctx) {
  Residue r = ctx.reduce(1);
  std::uint64_t total = 0;
  for (std::uint64_t k : parts) {
    total += k;
    r = ctx.mul(r, binom_mod_p(total, k, ctx));
  }
  return r;
}

} // namespace dpinv

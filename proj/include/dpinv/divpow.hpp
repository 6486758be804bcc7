#pragma once

/// \file divpow.hpp
/// The divided power algebra over F_p on a finite variable set: divided
/// monomials, multiplication via Lucas binomials, the divided power maps
/// gamma_i, membership in the truncated subalgebras D_s, and the phi_p
/// route to divided powers.
///
/// A companion PlainPoly type holds ordinary polynomials (coordinate-ring
/// side); its to_divided() is the polarisation map in coordinates.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpinv/modarith.hpp"

namespace dpinv {

/// Named variables with a multi-grading vector each. Immutable and shared.
class VarSet {
 public:
  struct Var {
    std::string name;
    std::vector<std::int32_t> grade; // multidegree contribution per exponent
  };

  explicit VarSet(std::vector<Var> vars) : vars_(std::move(vars)) {
    if (vars_.empty()) grading_dim_ = 1;
    else grading_dim_ = vars_.front().grade.size();
    for (const auto& v : vars_) {
      if (v.grade.size() != grading_dim_)
        throw std::invalid_argument("VarSet: inconsistent grading dimensions");
      for (auto g : v.grade)
        if (g < 0) throw std::invalid_argument("VarSet: negative degree weight");
    }
    for (std::size_t i = 0; i < vars_.size(); ++i)
      for (std::size_t j = i + 1; j < vars_.size(); ++j)
        if (vars_[i].name == vars_[j].name)
          throw std::invalid_argument("VarSet: duplicate variable name");
  }

  std::size_t size() const { return vars_.size(); }
  std::size_t grading_dim() const { return grading_dim_; }
  const std::string& name(std::size_t v) const { return vars_.at(v).name; }
  const std::vector<std::int32_t>& grade(std::size_t v) const { return vars_.at(v).grade; }

  std::uint32_t total_weight(std::size_t v) const {
    std::int32_t s = 0;
    for (auto g : vars_.at(v).grade) s += g;
    return static_cast<std::uint32_t>(s);
  }

  std::optional<std::size_t> find(const std::string& name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i].name == name) return i;
    return std::nullopt;
  }

 private:
  std::vector<Var> vars_;
  std::size_t grading_dim_;
};

using VarSetPtr = std::shared_ptr<const VarSet>;

/// x[i,j] for one n x n matrix, total grading.
inline VarSetPtr matrix_varset(std::uint32_t n) {
  std::vector<VarSet::Var> vars;
  for (std::uint32_t i = 1; i <= n; ++i)
    for (std::uint32_t j = 1; j <= n; ++j)
      vars.push_back({"x[" + std::to_string(i) + "," + std::to_string(j) + "]", {1}});
  return std::make_shared<VarSet>(std::move(vars));
}

/// x1[i,j], ..., xm[i,j] for m matrix slots; grading = degree per slot.
inline VarSetPtr matrix_varset(std::uint32_t n, std::uint32_t m) {
  if (m == 1) return matrix_varset(n);
  std::vector<VarSet::Var> vars;
  for (std::uint32_t q = 1; q <= m; ++q)
    for (std::uint32_t i = 1; i <= n; ++i)
      for (std::uint32_t j = 1; j <= n; ++j) {
        std::vector<std::int32_t> grade(m, 0);
        grade[q - 1] = 1;
        vars.push_back({"x" + std::to_string(q) + "[" + std::to_string(i) + "," +
                            std::to_string(j) + "]",
                        std::move(grade)});
      }
  return std::make_shared<VarSet>(std::move(vars));
}

/// Vector coordinates x1[a]..x_{m1}[a] (grade (1,0)) followed by covector
/// coordinates y1[a]..y_{m2}[a] (grade (0,1)).
inline VarSetPtr vec_covec_varset(std::uint32_t n, std::uint32_t m1, std::uint32_t m2) {
  std::vector<VarSet::Var> vars;
  for (std::uint32_t i = 1; i <= m1; ++i)
    for (std::uint32_t a = 1; a <= n; ++a)
      vars.push_back({"x" + std::to_string(i) + "[" + std::to_string(a) + "]", {1, 0}});
  for (std::uint32_t j = 1; j <= m2; ++j)
    for (std::uint32_t a = 1; a <= n; ++a)
      vars.push_back({"y" + std::to_string(j) + "[" + std::to_string(a) + "]", {0, 1}});
  return std::make_shared<VarSet>(std::move(vars));
}

/// Sparse exponent vector; zero exponents are never stored.
class DPMonomial {
 public:
  using Entry = std::pair<std::uint16_t, std::uint16_t>; // (variable, exponent)

  DPMonomial() = default;

  explicit DPMonomial(std::vector<Entry> entries) : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end());
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (entries_[i].second == 0) throw std::invalid_argument("DPMonomial: zero exponent");
      if (i && entries_[i].first == entries_[i - 1].first)
        throw std::invalid_argument("DPMonomial: duplicate variable");
    }
  }

  static DPMonomial variable(std::size_t v, std::uint16_t e = 1) {
    if (e == 0) return DPMonomial();
    return DPMonomial({{static_cast<std::uint16_t>(v), e}});
  }

  const std::vector<Entry>& entries() const { return entries_; }
  bool is_one() const { return entries_.empty(); }

  std::uint16_t exponent(std::size_t v) const {
    for (const auto& [var, e] : entries_)
      if (var == v) return e;
    return 0;
  }

  std::uint32_t plain_degree() const {
    std::uint32_t d = 0;
    for (const auto& [var, e] : entries_) d += e;
    return d;
  }

  std::uint32_t total_degree(const VarSet& vs) const {
    std::uint32_t d = 0;
    for (const auto& [var, e] : entries_) d += e * vs.total_weight(var);
    return d;
  }

  std::vector<std::int32_t> multidegree(const VarSet& vs) const {
    std::vector<std::int32_t> d(vs.grading_dim(), 0);
    for (const auto& [var, e] : entries_) {
      const auto& g = vs.grade(var);
      for (std::size_t c = 0; c < d.size(); ++c) d[c] += e * g[c];
    }
    return d;
  }

  std::uint16_t max_exponent() const {
    std::uint16_t m = 0;
    for (const auto& [var, e] : entries_) m = std::max(m, e);
    return m;
  }

  /// Graded order: lower plain degree first; within a degree the
  /// lexicographically larger exponent vector (variable 0 heaviest) first.
  bool operator<(const DPMonomial& o) const {
    std::uint32_t da = plain_degree(), db = o.plain_degree();
    if (da != db) return da < db;
    // Merge-walk the sparse vectors; larger exponent at the first
    // differing variable sorts earlier.
    std::size_t i = 0, j = 0;
    while (i < entries_.size() && j < o.entries_.size()) {
      if (entries_[i].first < o.entries_[j].first) return true;   // we have exp>0, other 0
      if (entries_[i].first > o.entries_[j].first) return false;
      if (entries_[i].second != o.entries_[j].second)
        return entries_[i].second > o.entries_[j].second;
      ++i;
      ++j;
    }
    return i < entries_.size();
  }

  bool operator==(const DPMonomial& o) const { return entries_ == o.entries_; }
  bool operator!=(const DPMonomial& o) const { return entries_ != o.entries_; }

 private:
  std::vector<Entry> entries_;
};

namespace detail {

/// Product of two divided monomials: coefficient prod_v binom(s_v+t_v, s_v)
/// by Lucas, or 0.
inline std::pair<DPMonomial, Residue> dp_monomial_mul(const DPMonomial& a, const DPMonomial& b,
                                                      const PrimeCtx& ctx) {
  std::vector<DPMonomial::Entry> out;
  Residue c = ctx.reduce(1);
  std::size_t i = 0, j = 0;
  const auto& ea = a.entries();
  const auto& eb = b.entries();
  while (i < ea.size() || j < eb.size()) {
    if (j == eb.size() || (i < ea.size() && ea[i].first < eb[j].first)) {
      out.push_back(ea[i++]);
    } else if (i == ea.size() || eb[j].first < ea[i].first) {
      out.push_back(eb[j++]);
    } else {
      std::uint32_t s = ea[i].second, t = eb[j].second;
      c = ctx.mul(c, binom_mod_p(s + t, s, ctx));
      if (c == 0) return {DPMonomial(), 0};
      out.push_back({ea[i].first, static_cast<std::uint16_t>(s + t)});
      ++i;
      ++j;
    }
  }
  return {DPMonomial(std::move(out)), c};
}

} // namespace detail

/// An F_p-linear combination of divided power monomials.
class DPElement {
 public:
  using TermMap = std::map<DPMonomial, Residue>;

  DPElement(VarSetPtr vars, PrimeCtx ctx) : vars_(std::move(vars)), ctx_(std::move(ctx)) {}

  static DPElement zero(VarSetPtr vars, const PrimeCtx& ctx) { return DPElement(vars, ctx); }

  static DPElement one(VarSetPtr vars, const PrimeCtx& ctx) {
    DPElement e(vars, ctx);
    e.add_term(DPMonomial(), 1);
    return e;
  }

  static DPElement variable(VarSetPtr vars, const PrimeCtx& ctx, std::size_t v,
                            std::uint16_t exp = 1) {
    DPElement e(vars, ctx);
    e.add_term(DPMonomial::variable(v, exp), 1);
    return e;
  }

  const TermMap& terms() const { return terms_; }
  VarSetPtr varset() const { return vars_; }
  const PrimeCtx& ctx() const { return ctx_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  Residue coefficient(const DPMonomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? 0 : it->second;
  }

  void add_term(const DPMonomial& m, Residue c) {
    c = ctx_.reduce(c);
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
      it->second = ctx_.add(it->second, c);
      if (it->second == 0) terms_.erase(it);
    }
  }

  DPElement operator+(const DPElement& o) const {
    check_compatible(o);
    DPElement r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
  }

  DPElement operator-(const DPElement& o) const {
    check_compatible(o);
    DPElement r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, ctx_.neg(c));
    return r;
  }

  DPElement scaled(Residue c) const {
    DPElement r(vars_, ctx_);
    c = ctx_.reduce(c);
    for (const auto& [m, cm] : terms_) r.add_term(m, ctx_.mul(cm, c));
    return r;
  }

  DPElement operator*(const DPElement& o) const {
    check_compatible(o);
    DPElement r(vars_, ctx_);
    for (const auto& [ma, ca] : terms_)
      for (const auto& [mb, cb] : o.terms_) {
        auto [m, c] = detail::dp_monomial_mul(ma, mb, ctx_);
        if (c) r.add_term(m, ctx_.mul(c, ctx_.mul(ca, cb)));
      }
    return r;
  }

  /// Plain power x^k (repeated multiplication).
  DPElement pow(std::uint32_t k) const {
    DPElement r = one(vars_, ctx_);
    DPElement base = *this;
    while (k) {
      if (k & 1) r = r * base;
      base = base * base;
      k >>= 1;
    }
    return r;
  }

  bool has_constant_term() const { return coefficient(DPMonomial()) != 0; }

  bool has_term_of_plain_degree(std::uint32_t d) const {
    for (const auto& [m, c] : terms_)
      if (m.plain_degree() == d) return true;
    return false;
  }

  std::uint16_t max_exponent() const {
    std::uint16_t e = 0;
    for (const auto& [m, c] : terms_) e = std::max(e, m.max_exponent());
    return e;
  }

  /// All exponents < p^s.
  bool is_in_Ds(std::uint32_t s) const {
    std::uint64_t bound = 1;
    for (std::uint32_t k = 0; k < s; ++k) bound *= ctx_.p();
    return max_exponent() < bound;
  }

  DPElement homogeneous_component(std::uint32_t total_degree) const {
    DPElement r(vars_, ctx_);
    for (const auto& [m, c] : terms_)
      if (m.total_degree(*vars_) == total_degree) r.add_term(m, c);
    return r;
  }

  DPElement homogeneous_component(const std::vector<std::int32_t>& multidegree) const {
    DPElement r(vars_, ctx_);
    for (const auto& [m, c] : terms_)
      if (m.multidegree(*vars_) == multidegree) r.add_term(m, c);
    return r;
  }

  /// Substitute 0 for the listed variables (drop every term using them).
  DPElement substitute_zero(const std::vector<std::size_t>& vars) const {
    DPElement r(vars_, ctx_);
    for (const auto& [m, c] : terms_) {
      bool uses = false;
      for (const auto& [v, e] : m.entries())
        if (std::find(vars.begin(), vars.end(), v) != vars.end()) {
          uses = true;
          break;
        }
      if (!uses) r.add_term(m, c);
    }
    return r;
  }

  /// Canonical text form, e.g. "1*x[1,1]^(2)*x[2,2]^(1) + 2*x[1,2]^(3)".
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << c;
      for (const auto& [v, e] : m.entries()) os << '*' << vars_->name(v) << "^(" << e << ')';
    }
    return os.str();
  }

  bool operator==(const DPElement& o) const {
    return ctx_.p() == o.ctx_.p() && terms_ == o.terms_;
  }
  bool operator!=(const DPElement& o) const { return !(*this == o); }

 private:
  void check_compatible(const DPElement& o) const {
    if (vars_.get() != o.vars_.get() || ctx_ != o.ctx_)
      throw std::invalid_argument("DPElement: mismatched variable sets or moduli");
  }

  VarSetPtr vars_;
  PrimeCtx ctx_;
  TermMap terms_;
};

namespace detail {

/// gamma_j of a single scaled divided monomial c*m:
///   gamma_j(c * prod v^{(t_v)}) = c^j / j! * prod (j t_v)!/(t_v!)^j * prod v^{(j t_v)}.
inline void gamma_of_term(std::uint32_t j, const DPMonomial& m, Residue c, const PrimeCtx& ctx,
                          DPElement& acc, const DPMonomial& partner, Residue partner_coeff) {
  if (j == 0) {
    auto [prod, pc] = dp_monomial_mul(DPMonomial(), partner, ctx);
    acc.add_term(prod, ctx.mul(pc, partner_coeff));
    return;
  }
  FactorialQuotient q(ctx);
  q.mul_factorial(j, -1, ctx);
  std::vector<DPMonomial::Entry> out;
  for (const auto& [v, t] : m.entries()) {
    q.mul_factorial(static_cast<std::uint64_t>(j) * t, 1, ctx);
    q.mul_factorial(t, -static_cast<std::int64_t>(j), ctx);
    out.push_back({v, static_cast<std::uint16_t>(j * t)});
  }
  if (q.valuation > 0) return;
  Residue coeff = ctx.mul(q.residue(ctx), ctx.pow(c, j));
  if (coeff == 0) return;
  auto [prod, pc] = dp_monomial_mul(DPMonomial(std::move(out)), partner, ctx);
  if (pc == 0) return;
  acc.add_term(prod, ctx.mul(ctx.mul(coeff, pc), partner_coeff));
}

} // namespace detail

/// gamma_i(x) for x without constant term.  Multi-term inputs expand over
/// all compositions of i across the terms; a guard rejects blowups.
inline DPElement dp_gamma(std::uint32_t i, const DPElement& x,
                          std::uint64_t composition_guard = 5'000'000) {
  if (x.has_constant_term())
    throw std::domain_error("dp_gamma: input has a constant term");
  const PrimeCtx& ctx = x.ctx();
  DPElement result(x.varset(), ctx);
  if (i == 0) return DPElement::one(x.varset(), ctx);

  std::vector<std::pair<DPMonomial, Residue>> terms(x.terms().begin(), x.terms().end());
  // Guard: number of compositions of i into term_count parts.
  {
    long double est = 1.0L;
    std::uint64_t n = terms.size();
    for (std::uint64_t k = 1; k < n; ++k) est *= static_cast<long double>(i + k) / k;
    if (est > static_cast<long double>(composition_guard))
      throw std::runtime_error("dp_gamma: expansion too large");
  }

  // Recursive expansion of gamma_i(t_1 + ... + t_k) via the sum rule.
  auto rec = [&](auto&& self, std::size_t idx, std::uint32_t rest, const DPMonomial& partial,
                 Residue coeff) -> void {
    if (coeff == 0) return;
    if (idx + 1 == terms.size()) {
      detail::gamma_of_term(rest, terms[idx].first, terms[idx].second, ctx, result, partial,
                            coeff);
      return;
    }
    for (std::uint32_t j = 0; j <= rest; ++j) {
      DPElement piece(x.varset(), ctx);
      detail::gamma_of_term(j, terms[idx].first, terms[idx].second, ctx, piece, DPMonomial(),
                            1);
      for (const auto& [m, c] : piece.terms()) {
        auto [prod, pc] = detail::dp_monomial_mul(partial, m, ctx);
        if (pc) self(self, idx + 1, rest - j, prod, ctx.mul(coeff, ctx.mul(c, pc)));
      }
    }
  };
  if (terms.empty()) return result; // gamma_i(0) = 0 for i >= 1
  rec(rec, 0, i, DPMonomial(), 1);
  return result;
}

/// phi_p(u) = u^p / p = -gamma_p(u) mod p.  Requires u without constant or
/// linear term and with all exponents < p.
inline DPElement phi_p(const DPElement& u) {
  const PrimeCtx& ctx = u.ctx();
  if (u.has_constant_term() || u.has_term_of_plain_degree(1))
    throw std::domain_error("phi_p: input has a constant or linear term");
  if (!u.is_in_Ds(1)) throw std::domain_error("phi_p: input has an exponent >= p");
  return dp_gamma(ctx.p(), u).scaled(ctx.neg(1));
}

/// u^{(m)} assembled from iterates of phi_p:
///   u^{(m)} = (1/q) u^{a_0} prod_{i>=1} (phi_p^i(u))^{a_i},
/// with m = sum a_i p^i and m! = q p^{nu_p(m!)}.
inline DPElement divided_power_via_phi(const DPElement& u, std::uint32_t m) {
  const PrimeCtx& ctx = u.ctx();
  if (u.has_constant_term() || u.has_term_of_plain_degree(1))
    throw std::domain_error("divided_power_via_phi: input has a constant or linear term");
  if (!u.is_in_Ds(1)) throw std::domain_error("divided_power_via_phi: exponent >= p");
  if (m == 0) return DPElement::one(u.varset(), ctx);

  PAdicDigits digits = p_adic_digits(m, ctx);
  DPElement result = DPElement::one(u.varset(), ctx);
  DPElement iter = u;
  for (std::size_t i = 0; i < digits.digits.size(); ++i) {
    if (i > 0) iter = phi_p(iter);
    if (digits.digits[i]) result = result * iter.pow(digits.digits[i]);
  }
  Residue q = factorial_unit_mod_p(m, ctx);
  return result.scaled(ctx.inv(q));
}

/// Ordinary polynomial on the same variable sets (coordinate-ring side).
/// Multiplication adds exponents; an optional truncation bound kills any
/// monomial with an exponent >= bound.
class PlainPoly {
 public:
  using TermMap = std::map<DPMonomial, Residue>;

  PlainPoly(VarSetPtr vars, PrimeCtx ctx) : vars_(std::move(vars)), ctx_(std::move(ctx)) {}

  static PlainPoly zero(VarSetPtr vars, const PrimeCtx& ctx) { return PlainPoly(vars, ctx); }

  static PlainPoly one(VarSetPtr vars, const PrimeCtx& ctx) {
    PlainPoly e(vars, ctx);
    e.add_term(DPMonomial(), 1);
    return e;
  }

  static PlainPoly variable(VarSetPtr vars, const PrimeCtx& ctx, std::size_t v,
                            std::uint16_t exp = 1) {
    PlainPoly e(vars, ctx);
    e.add_term(DPMonomial::variable(v, exp), 1);
    return e;
  }

  const TermMap& terms() const { return terms_; }
  VarSetPtr varset() const { return vars_; }
  const PrimeCtx& ctx() const { return ctx_; }
  bool is_zero() const { return terms_.empty(); }

  Residue coefficient(const DPMonomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? 0 : it->second;
  }

  void add_term(const DPMonomial& m, Residue c) {
    c = ctx_.reduce(c);
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
      it->second = ctx_.add(it->second, c);
      if (it->second == 0) terms_.erase(it);
    }
  }

  PlainPoly operator+(const PlainPoly& o) const {
    check_compatible(o);
    PlainPoly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
  }

  PlainPoly operator-(const PlainPoly& o) const {
    check_compatible(o);
    PlainPoly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, ctx_.neg(c));
    return r;
  }

  PlainPoly scaled(Residue c) const {
    PlainPoly r(vars_, ctx_);
    c = ctx_.reduce(c);
    for (const auto& [m, cm] : terms_) r.add_term(m, ctx_.mul(cm, c));
    return r;
  }

  /// Multiply; exponents >= trunc_bound are annihilated (0 = no bound).
  PlainPoly mul(const PlainPoly& o, std::uint32_t trunc_bound = 0) const {
    check_compatible(o);
    PlainPoly r(vars_, ctx_);
    for (const auto& [ma, ca] : terms_)
      for (const auto& [mb, cb] : o.terms_) {
        std::vector<DPMonomial::Entry> out;
        bool dead = false;
        std::size_t i = 0, j = 0;
        const auto& ea = ma.entries();
        const auto& eb = mb.entries();
        while ((i < ea.size() || j < eb.size()) && !dead) {
          DPMonomial::Entry e;
          if (j == eb.size() || (i < ea.size() && ea[i].first < eb[j].first)) e = ea[i++];
          else if (i == ea.size() || eb[j].first < ea[i].first) e = eb[j++];
          else {
            e = {ea[i].first, static_cast<std::uint16_t>(ea[i].second + eb[j].second)};
            ++i;
            ++j;
          }
          if (trunc_bound && e.second >= trunc_bound) dead = true;
          out.push_back(e);
        }
        if (!dead) r.add_term(DPMonomial(std::move(out)), ctx_.mul(ca, cb));
      }
    return r;
  }

  PlainPoly operator*(const PlainPoly& o) const { return mul(o); }

  PlainPoly pow(std::uint32_t k, std::uint32_t trunc_bound = 0) const {
    PlainPoly r = one(vars_, ctx_);
    PlainPoly base = *this;
    while (k) {
      if (k & 1) r = r.mul(base, trunc_bound);
      base = base.mul(base, trunc_bound);
      k >>= 1;
    }
    return r;
  }

  /// Polarisation in coordinates: x^t -> t! x^{(t)}.  Kernel = monomials
  /// with an exponent >= p, image = D_1.
  DPElement to_divided() const {
    DPElement r(vars_, ctx_);
    for (const auto& [m, c] : terms_) {
      Residue f = c;
      for (const auto& [v, e] : m.entries()) f = ctx_.mul(f, factorial_mod_p(e, ctx_));
      if (f) r.add_term(m, f);
    }
    return r;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << c;
      for (const auto& [v, e] : m.entries()) {
        os << '*' << vars_->name(v);
        if (e > 1) os << '^' << e;
      }
    }
    return os.str();
  }

  bool operator==(const PlainPoly& o) const {
    return ctx_.p() == o.ctx_.p() && terms_ == o.terms_;
  }
  bool operator!=(const PlainPoly& o) const { return !(*this == o); }

 private:
  void check_compatible(const PlainPoly& o) const {
    if (vars_.get() != o.vars_.get() || ctx_ != o.ctx_)
      throw std::invalid_argument("PlainPoly: mismatched variable sets or moduli");
  }

  VarSetPtr vars_;
  PrimeCtx ctx_;
  TermMap terms_;
};

} // namespace dpinv

#pragma once

/// \file symmfunc.hpp
/// Concrete invariants of one or several matrices: e_i = tr of the i-th
/// exterior power, h_i = tr of the i-th symmetric power (via its integer
/// expansion in the e's), p_i = tr(X^i), their cycle-pattern versions on
/// several matrices, divided families gamma_{m_i}, and the bracket
/// functions of vectors and covectors.
///
/// The e/h/p functions are computed in the plain coordinate ring and
/// carried into divided-power coordinates by the polarisation map (an
/// algebra homomorphism), which is where the gamma operations live.

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "dpinv/divpow.hpp"
#include "dpinv/partitions.hpp"
#include "dpinv/tensorinv.hpp"

namespace dpinv {

/// n x n matrix variables in m slots.
struct MatrixVarCtx {
  std::uint32_t n;
  std::uint32_t m;
  PrimeCtx ctx;
  VarSetPtr vars;
};

inline MatrixVarCtx make_matrix_ctx(std::uint32_t n, const PrimeCtx& ctx, std::uint32_t m = 1) {
  if (n < 1 || m < 1) throw std::invalid_argument("make_matrix_ctx: n, m >= 1");
  return MatrixVarCtx{n, m, ctx, matrix_varset(n, m)};
}

/// Variable index of x_q[i,j]; all arguments 1-based.
inline std::size_t matrix_var_index(const MatrixVarCtx& mc, std::uint32_t q, std::uint32_t i,
                                    std::uint32_t j) {
  if (q < 1 || q > mc.m || i < 1 || i > mc.n || j < 1 || j > mc.n)
    throw std::out_of_range("matrix_var_index");
  return static_cast<std::size_t>(q - 1) * mc.n * mc.n + (i - 1) * mc.n + (j - 1);
}

using SymbolicMatrix = std::vector<std::vector<PlainPoly>>;

/// The generic matrix of slot q as a matrix of coordinate variables.
inline SymbolicMatrix generic_matrix(const MatrixVarCtx& mc, std::uint32_t q = 1) {
  SymbolicMatrix M;
  for (std::uint32_t i = 1; i <= mc.n; ++i) {
    std::vector<PlainPoly> row;
    for (std::uint32_t j = 1; j <= mc.n; ++j)
      row.push_back(PlainPoly::variable(mc.vars, mc.ctx, matrix_var_index(mc, q, i, j)));
    M.push_back(std::move(row));
  }
  return M;
}

inline SymbolicMatrix matrix_product(const SymbolicMatrix& A, const SymbolicMatrix& B) {
  std::size_t n = A.size();
  SymbolicMatrix C;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<PlainPoly> row;
    for (std::size_t j = 0; j < n; ++j) {
      PlainPoly acc = A[i][0] * B[0][j];
      for (std::size_t k = 1; k < n; ++k) acc = acc + A[i][k] * B[k][j];
      row.push_back(std::move(acc));
    }
    C.push_back(std::move(row));
  }
  return C;
}

inline PlainPoly matrix_trace(const SymbolicMatrix& M) {
  PlainPoly t = M[0][0];
  for (std::size_t i = 1; i < M.size(); ++i) t = t + M[i][i];
  return t;
}

/// Matrix product along a cycle pattern word.
inline SymbolicMatrix pattern_matrix(const MatrixVarCtx& mc, const CyclePattern& b) {
  if (b.max_letter() > mc.m) throw std::invalid_argument("pattern_matrix: letter exceeds m");
  SymbolicMatrix M = generic_matrix(mc, b.word()[0]);
  for (std::size_t k = 1; k < b.word().size(); ++k)
    M = matrix_product(M, generic_matrix(mc, b.word()[k]));
  return M;
}

/// e_i(M) = tr of the i-th exterior power: the sum of the principal i x i
/// minors, expanded by Leibniz.  Zero for i > n.
inline PlainPoly e_of_matrix(std::uint32_t i, const SymbolicMatrix& M, const MatrixVarCtx& mc) {
  std::uint32_t n = static_cast<std::uint32_t>(M.size());
  PlainPoly acc = PlainPoly::zero(mc.vars, mc.ctx);
  if (i == 0) return PlainPoly::one(mc.vars, mc.ctx);
  if (i > n) return acc;
  std::vector<std::uint32_t> subset;
  auto rec = [&](auto&& self, std::uint32_t next) -> void {
    if (subset.size() == i) {
      // det of the principal minor on `subset`.
      std::vector<std::uint32_t> perm(i);
      std::iota(perm.begin(), perm.end(), 0u);
      do {
        int sign = 1;
        for (std::uint32_t a = 0; a < i; ++a)
          for (std::uint32_t b = a + 1; b < i; ++b)
            if (perm[a] > perm[b]) sign = -sign;
        PlainPoly term = M[subset[0]][subset[perm[0]]];
        for (std::uint32_t k = 1; k < i; ++k) term = term * M[subset[k]][subset[perm[k]]];
        acc = acc + (sign > 0 ? term : term.scaled(mc.ctx.neg(1)));
      } while (std::next_permutation(perm.begin(), perm.end()));
      return;
    }
    for (std::uint32_t v = next; v < n; ++v) {
      subset.push_back(v);
      self(self, v + 1);
      subset.pop_back();
    }
  };
  rec(rec, 0);
  return acc;
}

/// h_i(M) = tr of the i-th symmetric power, through the integer identity
/// h_i = sum_{k>=1} (-1)^{k-1} e_k h_{i-k} (column expansion of the
/// Jacobi-Trudi determinant in the e's).
inline PlainPoly h_of_matrix(std::uint32_t i, const SymbolicMatrix& M, const MatrixVarCtx& mc) {
  std::uint32_t n = static_cast<std::uint32_t>(M.size());
  std::vector<PlainPoly> e;
  for (std::uint32_t k = 0; k <= std::min(i, n); ++k) e.push_back(e_of_matrix(k, M, mc));
  std::vector<PlainPoly> h;
  h.push_back(PlainPoly::one(mc.vars, mc.ctx));
  for (std::uint32_t d = 1; d <= i; ++d) {
    PlainPoly acc = PlainPoly::zero(mc.vars, mc.ctx);
    for (std::uint32_t k = 1; k <= std::min(d, n); ++k) {
      PlainPoly term = e[k] * h[d - k];
      acc = (k % 2 == 1) ? acc + term : acc - term;
    }
    h.push_back(std::move(acc));
  }
  return h[i];
}

/// p_i(M) = tr(M^i).
inline PlainPoly p_of_matrix(std::uint32_t i, const SymbolicMatrix& M, const MatrixVarCtx& mc) {
  if (i < 1) throw std::invalid_argument("p_of_matrix: i >= 1");
  SymbolicMatrix P = M;
  for (std::uint32_t k = 1; k < i; ++k) P = matrix_product(P, M);
  (void)mc;
  return matrix_trace(P);
}

/// Plain coordinate-ring forms.
inline PlainPoly elementary_e_plain(std::uint32_t i, const MatrixVarCtx& mc,
                                    std::uint32_t slot = 1) {
  return e_of_matrix(i, generic_matrix(mc, slot), mc);
}
inline PlainPoly complete_h_plain(std::uint32_t i, const MatrixVarCtx& mc,
                                  std::uint32_t slot = 1) {
  return h_of_matrix(i, generic_matrix(mc, slot), mc);
}
inline PlainPoly power_p_plain(std::uint32_t i, const MatrixVarCtx& mc, std::uint32_t slot = 1) {
  return p_of_matrix(i, generic_matrix(mc, slot), mc);
}

/// Divided-power coordinates (images under polarisation).
inline DPElement elementary_e(std::uint32_t i, const MatrixVarCtx& mc, std::uint32_t slot = 1) {
  return elementary_e_plain(i, mc, slot).to_divided();
}
inline DPElement complete_h(std::uint32_t i, const MatrixVarCtx& mc, std::uint32_t slot = 1) {
  return complete_h_plain(i, mc, slot).to_divided();
}
inline DPElement power_p(std::uint32_t i, const MatrixVarCtx& mc, std::uint32_t slot = 1) {
  return power_p_plain(i, mc, slot).to_divided();
}

enum class SymKind { E, H, P };

/// f_b = f(X_{i_1} ... X_{i_t}) for a cycle pattern b, divided coordinates.
inline DPElement pattern_function(SymKind kind, std::uint32_t i, const CyclePattern& b,
                                  const MatrixVarCtx& mc) {
  SymbolicMatrix M = pattern_matrix(mc, b);
  switch (kind) {
    case SymKind::E: return e_of_matrix(i, M, mc).to_divided();
    case SymKind::H: return h_of_matrix(i, M, mc).to_divided();
    case SymKind::P: return p_of_matrix(i, M, mc).to_divided();
  }
  throw std::logic_error("pattern_function: bad kind");
}

namespace detail {

/// Exact-integer route to divided p_lambda: expand p_lambda as a plain
/// integer polynomial (walk sums for the traces), then the divided-basis
/// coordinate at exponents t is coeff * prod t! / z_lambda, an exact
/// integer division.  Keeps the r = 14 case out of S_r enumeration.
inline DPElement divided_p_zform(const Partition& lam, const MatrixVarCtx& mc) {
  if (mc.m != 1) throw std::invalid_argument("divided_p_zform: single-slot contexts only");
  using Poly = std::map<DPMonomial, long long>;
  std::uint32_t n = mc.n;

  auto trace_power = [&](std::uint32_t k) {
    Poly out;
    std::vector<std::uint32_t> walk(k, 0);
    for (;;) {
      std::vector<DPMonomial::Entry> entries;
      {
        std::map<std::uint16_t, std::uint16_t> exps;
        for (std::uint32_t l = 0; l < k; ++l) {
          std::uint16_t v = static_cast<std::uint16_t>(walk[l] * n + walk[(l + 1) % k]);
          ++exps[v];
        }
        entries.assign(exps.begin(), exps.end());
      }
      ++out[DPMonomial(std::move(entries))];
      std::uint32_t idx = 0;
      for (; idx < k; ++idx) {
        if (++walk[idx] < n) break;
        walk[idx] = 0;
      }
      if (idx == k) break;
    }
    return out;
  };

  auto poly_mul = [&](const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ma, ca] : a)
      for (const auto& [mb, cb] : b) {
        std::map<std::uint16_t, std::uint16_t> exps;
        for (const auto& [v, e] : ma.entries()) exps[v] += e;
        for (const auto& [v, e] : mb.entries()) exps[v] += e;
        std::vector<DPMonomial::Entry> entries(exps.begin(), exps.end());
        long long prod;
        if (__builtin_mul_overflow(ca, cb, &prod))
          throw std::overflow_error("divided_p_zform: coefficient overflow");
        out[DPMonomial(std::move(entries))] += prod;
      }
    return out;
  };

  Poly acc{{DPMonomial(), 1}};
  for (std::uint32_t part : lam.parts()) acc = poly_mul(acc, trace_power(part));

  std::uint64_t z = centraliser_orders(lam).z;
  DPElement out(mc.vars, mc.ctx);
  for (const auto& [m, c] : acc) {
    if (c == 0) continue;
    // divided coordinate = c * prod t! / z, exactly.
    __int128 v = c;
    for (const auto& [var, e] : m.entries())
      for (std::uint16_t k = 2; k <= e; ++k) v *= k;
    if (v % static_cast<__int128>(z) != 0)
      throw std::logic_error("divided_p_zform: non-integral divided coordinate");
    v /= static_cast<__int128>(z);
    __int128 pmod = static_cast<__int128>(mc.ctx.p());
    long long reduced = static_cast<long long>(((v % pmod) + pmod) % pmod);
    out.add_term(m, static_cast<Residue>(reduced));
  }
  return out;
}

} // namespace detail

/// Divided p_lambda = (1/z_lambda) p_lambda in divided-power coordinates.
/// Small degrees go through the conjugacy-class sum; larger degrees use
/// the exact integer expansion.
inline DPElement divided_p(const Partition& lam, const MatrixVarCtx& mc) {
  std::uint64_t r = lam.size();
  if (r <= 8) {
    PermClassSum cls = class_sum_of_partition(lam, mc.ctx);
    return to_dp_element(cls, mc.n, mc.vars);
  }
  return detail::divided_p_zform(lam, mc);
}

/// Sum of divided p_lambda over one s-equivalence class of partitions.
inline DPElement divided_p_class_sum(const std::vector<Partition>& cls, const MatrixVarCtx& mc) {
  if (cls.empty()) throw std::invalid_argument("divided_p_class_sum: empty class");
  std::uint64_t r = cls.front().size();
  if (r <= 8) {
    PermClassSum sum(static_cast<std::uint32_t>(r), mc.ctx);
    for (const Partition& lam : cls)
      for (const auto& [pi, c] : class_sum_of_partition(lam, mc.ctx).coefficients())
        sum.add(pi, c);
    sum.mark_symmetric();
    return to_dp_element(sum, mc.n, mc.vars);
  }
  DPElement acc = DPElement::zero(mc.vars, mc.ctx);
  for (const Partition& lam : cls) acc = acc + detail::divided_p_zform(lam, mc);
  return acc;
}

/// Divided e_lambda or h_lambda: prod_i gamma_{m_i}(f_i).  Parts above n
/// kill the e-family (e_i = 0 there).
inline DPElement divided_family(const Partition& lam, SymKind kind, const MatrixVarCtx& mc) {
  if (kind == SymKind::P) return divided_p(lam, mc);
  DPElement acc = DPElement::one(mc.vars, mc.ctx);
  auto mult = lam.multiplicities();
  for (std::uint32_t i = 1; i < mult.size(); ++i) {
    if (!mult[i]) continue;
    DPElement f = (kind == SymKind::E) ? elementary_e(i, mc) : complete_h(i, mc);
    acc = acc * dp_gamma(mult[i], f);
  }
  return acc;
}

/// Divided e/h families indexed by a multipartition:
/// prod_b prod_i gamma_{m_i(lambda(b))}(f_{i,b}).
inline DPElement divided_family_multi(const MultiPartition& bl, SymKind kind,
                                      const MatrixVarCtx& mc) {
  if (kind == SymKind::P)
    throw std::invalid_argument("divided_family_multi: p-family goes through class sums");
  DPElement acc = DPElement::one(mc.vars, mc.ctx);
  for (const auto& [b, lam] : bl.support()) {
    auto mult = lam.multiplicities();
    for (std::uint32_t i = 1; i < mult.size(); ++i) {
      if (!mult[i]) continue;
      DPElement f = pattern_function(kind, i, b, mc);
      acc = acc * dp_gamma(mult[i], f);
    }
  }
  return acc;
}

/// Divided p_boldlambda via the S_alpha class sum.
inline DPElement divided_p_multi(const MultiPartition& bl, const YoungData& young,
                                 const MatrixVarCtx& mc) {
  PermClassSum cls = class_sum_of_multipartition(bl, young, mc.ctx);
  return to_dp_element_multi(cls, young, mc.n, mc.vars);
}

/// Sum of divided p_boldlambda over one (s,alpha)-equivalence class.
inline DPElement divided_p_multi_class_sum(const MultiPartition& bl, const YoungData& young,
                                           const MatrixVarCtx& mc, std::uint32_t s) {
  PermClassSum cls = class_sum_s_alpha_equivalence(bl, young, mc.ctx, s);
  return to_dp_element_multi(cls, young, mc.n, mc.vars);
}

/// Vectors-and-covectors variable context.
struct VecCovecCtx {
  std::uint32_t n, m1, m2;
  PrimeCtx ctx;
  VarSetPtr vars;
};

inline VecCovecCtx make_vec_covec_ctx(std::uint32_t n, std::uint32_t m1, std::uint32_t m2,
                                      const PrimeCtx& ctx) {
  if (n < 1) throw std::invalid_argument("make_vec_covec_ctx: n >= 1");
  return VecCovecCtx{n, m1, m2, ctx, vec_covec_varset(n, m1, m2)};
}

/// Index of x_i[a] (vector i, coordinate a), 1-based.
inline std::size_t vec_var_index(const VecCovecCtx& vc, std::uint32_t i, std::uint32_t a) {
  if (i < 1 || i > vc.m1 || a < 1 || a > vc.n) throw std::out_of_range("vec_var_index");
  return static_cast<std::size_t>(i - 1) * vc.n + (a - 1);
}

/// Index of y_j[a] (covector j, coordinate a), 1-based.
inline std::size_t covec_var_index(const VecCovecCtx& vc, std::uint32_t j, std::uint32_t a) {
  if (j < 1 || j > vc.m2 || a < 1 || a > vc.n) throw std::out_of_range("covec_var_index");
  return static_cast<std::size_t>(vc.m1) * vc.n + (j - 1) * vc.n + (a - 1);
}

/// <x_i, y_j> = sum_a x_i[a] y_j[a], of bidegree (1,1).
inline DPElement bracket(std::uint32_t i, std::uint32_t j, const VecCovecCtx& vc) {
  DPElement acc = DPElement::zero(vc.vars, vc.ctx);
  for (std::uint32_t a = 1; a <= vc.n; ++a) {
    DPElement x = DPElement::variable(vc.vars, vc.ctx, vec_var_index(vc, i, a));
    DPElement y = DPElement::variable(vc.vars, vc.ctx, covec_var_index(vc, j, a));
    acc = acc + x * y;
  }
  return acc;
}

} // namespace dpinv

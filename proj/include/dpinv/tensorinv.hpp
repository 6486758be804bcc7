#pragma once

/// \file tensorinv.hpp
/// Multilinear matrix invariants through the symmetric group: class sums
/// of permutations acting as the functionals f_pi (equivalently the
/// tensors E_pi), membership in D_s by the repeated-argument criterion,
/// conversion to divided-power coordinates, and partial polarisation.
///
/// Functionals are never materialised as dense n^{2r} tensors; a class
/// sum is its permutation support plus lazy evaluation.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "dpinv/divpow.hpp"
#include "dpinv/modarith.hpp"
#include "dpinv/partitions.hpp"
#include "dpinv/perm.hpp"

namespace dpinv {

/// The elementary-matrix tuple (E_{i_1 j_1},...,E_{i_r j_r}); values 0-based.
struct BasisTuple {
  std::vector<std::uint32_t> i, j;

  std::uint32_t r() const { return static_cast<std::uint32_t>(i.size()); }
};

/// F_p-linear combination of permutations of {1..r}, read as sum c_pi f_pi.
class PermClassSum {
 public:
  PermClassSum(std::uint32_t r, PrimeCtx ctx) : r_(r), ctx_(std::move(ctx)) {}

  std::uint32_t r() const { return r_; }
  const PrimeCtx& ctx() const { return ctx_; }
  const std::map<Permutation, Residue>& coefficients() const { return coeffs_; }
  bool symmetric_by_construction() const { return symmetric_; }

  void add(const Permutation& pi, Residue c) {
    if (pi.degree() != r_) throw std::invalid_argument("PermClassSum: degree mismatch");
    c = ctx_.reduce(c);
    if (!c) return;
    auto [it, inserted] = coeffs_.emplace(pi, c);
    if (!inserted) {
      it->second = ctx_.add(it->second, c);
      if (!it->second) coeffs_.erase(it);
    }
  }

  PermClassSum operator+(const PermClassSum& o) const {
    if (r_ != o.r_ || ctx_ != o.ctx_) throw std::invalid_argument("PermClassSum: mismatch");
    PermClassSum s = *this;
    for (const auto& [pi, c] : o.coeffs_) s.add(pi, c);
    s.symmetric_ = symmetric_ && o.symmetric_;
    return s;
  }

  PermClassSum conjugated_by(const Permutation& sigma) const {
    PermClassSum s(r_, ctx_);
    for (const auto& [pi, c] : coeffs_) s.add(pi.conjugated_by(sigma), c);
    s.symmetric_ = symmetric_;
    return s;
  }

  void mark_symmetric() { symmetric_ = true; }

 private:
  std::uint32_t r_;
  PrimeCtx ctx_;
  std::map<Permutation, Residue> coeffs_;
  bool symmetric_ = false;
};

/// (x_{i_1 j_1} x ... x x_{i_r j_r})(sum c_pi E_pi) = sum over pi with
/// j = i o pi of c_pi.
inline Residue eval_class_sum(const PermClassSum& u, const BasisTuple& t) {
  if (t.i.size() != u.r() || t.j.size() != u.r())
    throw std::invalid_argument("eval_class_sum: tuple length mismatch");
  const PrimeCtx& ctx = u.ctx();
  Residue acc = 0;
  for (const auto& [pi, c] : u.coefficients()) {
    bool match = true;
    for (std::uint32_t l = 0; l < u.r() && match; ++l) match = (t.j[l] == t.i[pi(l)]);
    if (match) acc = ctx.add(acc, c);
  }
  return acc;
}

namespace detail {

inline void check_class_sum_guard(std::uint32_t r) {
  if (r > 8) throw std::invalid_argument("class_sum: r > 8");
}

} // namespace detail

/// Sum over the S_r-conjugacy class of cycle type lambda.
inline PermClassSum class_sum_of_partition(const Partition& lam, const PrimeCtx& ctx) {
  std::uint32_t r = static_cast<std::uint32_t>(lam.size());
  detail::check_class_sum_guard(r);
  PermClassSum s(r, ctx);
  std::vector<std::uint32_t> type(lam.parts());
  for (const auto& pi : all_permutations(r))
    if (pi.cycle_lengths_desc() == type) s.add(pi, 1);
  s.mark_symmetric();
  return s;
}

/// Sum over the union of conjugacy classes s-equivalent to lambda.
inline PermClassSum class_sum_s_equivalence(const Partition& lam, const PrimeCtx& ctx,
                                            std::uint32_t s) {
  std::uint32_t r = static_cast<std::uint32_t>(lam.size());
  detail::check_class_sum_guard(r);
  Partition reduced = s_reduce(lam, ctx, s);
  PermClassSum sum(r, ctx);
  for (const auto& pi : all_permutations(r)) {
    Partition type(pi.cycle_lengths_desc());
    if (s_reduce(type, ctx, s) == reduced) sum.add(pi, 1);
  }
  sum.mark_symmetric();
  return sum;
}

/// Sum over the S_alpha-conjugacy class with the given S_alpha cycle type.
inline PermClassSum class_sum_of_multipartition(const MultiPartition& bl, const YoungData& young,
                                                const PrimeCtx& ctx) {
  detail::check_class_sum_guard(young.r());
  PermClassSum s(young.r(), ctx);
  for (const auto& pi : all_permutations(young.r()))
    if (s_alpha_cycle_type(pi, young) == bl) s.add(pi, 1);
  return s;
}

/// Sum over the union of S_alpha-classes (s,alpha)-equivalent to bl.
inline PermClassSum class_sum_s_alpha_equivalence(const MultiPartition& bl,
                                                  const YoungData& young, const PrimeCtx& ctx,
                                                  std::uint32_t s) {
  detail::check_class_sum_guard(young.r());
  MultiPartition reduced = s_reduce_multi(bl, ctx, s, young.slots());
  PermClassSum sum(young.r(), ctx);
  for (const auto& pi : all_permutations(young.r()))
    if (s_reduce_multi(s_alpha_cycle_type(pi, young), ctx, s, young.slots()) == reduced)
      sum.add(pi, 1);
  return sum;
}

/// Sum over the S_{alpha1} x S_{alpha2} orbit of pi under
/// (sigma, tau) . pi = sigma pi tau^{-1}.
inline PermClassSum orbit_sum_two_sided(const Permutation& pi, const YoungData& young1,
                                        const YoungData& young2, const PrimeCtx& ctx) {
  std::uint32_t r = pi.degree();
  detail::check_class_sum_guard(r);
  if (young1.r() != r || young2.r() != r)
    throw std::invalid_argument("orbit_sum_two_sided: composition sizes must equal r");
  std::set<Permutation> orbit;
  for (const auto& sigma : young1.young_subgroup())
    for (const auto& tau : young2.young_subgroup())
      orbit.insert(sigma.compose(pi).compose(tau.inverse()));
  PermClassSum s(r, ctx);
  for (const auto& rho : orbit) s.add(rho, 1);
  return s;
}

namespace detail {

/// Enumerate canonical basis tuples with a forced block of identical pairs:
/// positions of `block` all carry the same pair, the rest are free; values
/// are produced in restricted-growth form over an alphabet of size
/// min(n, 2r).  Under simultaneous position symmetry and value relabelling
/// this reaches every obstruction tuple.
inline bool for_each_repetition_tuple(std::uint32_t r, std::uint32_t n,
                                      const std::vector<std::uint32_t>& block,
                                      const std::function<bool(const BasisTuple&)>& visit) {
  std::uint32_t value_cap = std::min<std::uint32_t>(n, 2 * r);
  std::vector<std::uint32_t> flat; // interleaved i,j per position, fill order
  std::vector<std::uint32_t> order; // positions: block first, then the rest
  std::vector<bool> in_block(r, false);
  for (auto b : block) in_block[b] = true;
  for (auto b : block) order.push_back(b);
  for (std::uint32_t l = 0; l < r; ++l)
    if (!in_block[l]) order.push_back(l);

  BasisTuple t;
  t.i.assign(r, 0);
  t.j.assign(r, 0);

  // Assign (i,j) of order[k] for k >= block.size(); the block pair is
  // assigned once at k = 0.
  auto rec = [&](auto&& self, std::size_t k, std::uint32_t used) -> bool {
    if (k == order.size()) return visit(t);
    std::uint32_t pos = order[k];
    if (k > 0 && k < block.size()) {
      t.i[pos] = t.i[block[0]];
      t.j[pos] = t.j[block[0]];
      return self(self, k + 1, used);
    }
    std::uint32_t icap = std::min(used + 1, value_cap);
    for (std::uint32_t iv = 0; iv < icap; ++iv) {
      t.i[pos] = iv;
      std::uint32_t used2 = std::max(used, iv + 1);
      std::uint32_t jcap = std::min(used2 + 1, value_cap);
      for (std::uint32_t jv = 0; jv < jcap; ++jv) {
        t.j[pos] = jv;
        std::uint32_t used3 = std::max(used2, jv + 1);
        if (!self(self, k + 1, used3)) return false;
      }
    }
    return true;
  };
  return rec(rec, 0, 0);
}

} // namespace detail

/// True iff u evaluates to zero on every tuple in which at least p^s pairs
/// coincide (within one block of `young`, when given).  `full_oracle`
/// enumerates all n^{2r} tuples instead of symmetry representatives.
inline bool is_in_Ds_tensor(const PermClassSum& u, std::uint32_t n, const PrimeCtx& ctx,
                            std::uint32_t s, const std::optional<YoungData>& young = {},
                            bool full_oracle = false) {
  std::uint32_t r = u.r();
  std::uint64_t ps = 1;
  for (std::uint32_t k = 0; k < s; ++k) ps *= ctx.p();
  if (ps > r) return true; // no tuple has p^s repetitions

  if (full_oracle) {
    // Direct scan over all tuples; guarded.
    long double total = 1;
    for (std::uint32_t k = 0; k < 2 * r; ++k) total *= n;
    if (total > 2e7L) throw std::runtime_error("is_in_Ds_tensor: full oracle too large");
    std::vector<std::uint32_t> iv(r, 0), jv(r, 0);
    auto bump = [&](std::vector<std::uint32_t>& v) {
      for (std::uint32_t k = 0; k < r; ++k) {
        if (++v[k] < n) return true;
        v[k] = 0;
      }
      return false;
    };
    do {
      std::vector<std::uint32_t> jt(r, 0);
      do {
        BasisTuple t{iv, jt};
        // count max repetitions of a pair within a young block (or overall)
        std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> cnt;
        bool hit = false;
        for (std::uint32_t l = 0; l < r && !hit; ++l) {
          auto key = std::make_pair(t.i[l] * n + t.j[l],
                                    young ? young->block_of(l) : 0u);
          if (++cnt[{key.first, key.second}] >= ps) hit = true;
        }
        if (hit && eval_class_sum(u, t) != 0) return false;
      } while (bump(jt));
    } while (bump(iv));
    return true;
  }

  // Symmetry-reduced mode: the repeated block may be taken as the first
  // p^s positions (of a young block).  Valid only for sums stable under
  // the relevant position permutations; sampled check below.
  {
    auto swapped_fixes = [&](std::uint32_t a, std::uint32_t b) {
      std::vector<std::uint32_t> img(r);
      std::iota(img.begin(), img.end(), 0u);
      std::swap(img[a], img[b]);
      return u.conjugated_by(Permutation(img)).coefficients() == u.coefficients();
    };
    for (std::uint32_t k = 0; k + 1 < r; ++k) {
      bool same_block = !young || young->block_of(k) == young->block_of(k + 1);
      if (same_block && !swapped_fixes(k, k + 1))
        throw std::invalid_argument("is_in_Ds_tensor: sum lacks the position symmetry "
                                    "required by the reduced enumeration");
    }
  }
  std::vector<std::vector<std::uint32_t>> blocks;
  if (young) {
    for (std::uint32_t b = 0; b < young->slots(); ++b) {
      auto blk = young->block(b);
      if (blk.size() >= ps)
        blocks.push_back(std::vector<std::uint32_t>(blk.begin(), blk.begin() + ps));
    }
  } else {
    std::vector<std::uint32_t> blk(ps);
    std::iota(blk.begin(), blk.end(), 0u);
    blocks.push_back(blk);
  }

  for (const auto& blk : blocks) {
    bool ok = detail::for_each_repetition_tuple(
        r, n, blk, [&](const BasisTuple& t) { return eval_class_sum(u, t) == 0; });
    if (!ok) return false;
  }
  return true;
}

/// Convert a symmetric class sum to divided-power coordinates on x[i,j]:
/// the coefficient of prod x_{ij}^{(t_ij)} is the evaluation at any tuple
/// of content t.
inline DPElement to_dp_element(const PermClassSum& u, std::uint32_t n, VarSetPtr vars = nullptr) {
  std::uint32_t r = u.r();
  const PrimeCtx& ctx = u.ctx();
  if (!vars) vars = matrix_varset(n);

  if (!u.symmetric_by_construction()) {
    // Sampled symmetry check: conjugating by adjacent transpositions must
    // fix the sum.
    for (std::uint32_t k = 0; k + 1 < r; ++k) {
      std::vector<std::uint32_t> img(r);
      std::iota(img.begin(), img.end(), 0u);
      std::swap(img[k], img[k + 1]);
      if (!(u.conjugated_by(Permutation(img)).coefficients() == u.coefficients()))
        throw std::invalid_argument("to_dp_element: class sum is not S_r-symmetric");
    }
  }

  DPElement out(vars, ctx);
  // Enumerate exponent matrices t over the n^2 cells with sum r.
  std::vector<std::uint16_t> exps(n * n, 0);
  BasisTuple t;
  auto emit = [&]() {
    t.i.clear();
    t.j.clear();
    std::vector<DPMonomial::Entry> entries;
    for (std::uint32_t cell = 0; cell < n * n; ++cell) {
      if (!exps[cell]) continue;
      entries.push_back({static_cast<std::uint16_t>(cell), exps[cell]});
      for (std::uint16_t k = 0; k < exps[cell]; ++k) {
        t.i.push_back(cell / n);
        t.j.push_back(cell % n);
      }
    }
    Residue c = eval_class_sum(u, t);
    if (c) out.add_term(DPMonomial(std::move(entries)), c);
  };
  auto rec = [&](auto&& self, std::uint32_t cell, std::uint32_t rest) -> void {
    if (cell + 1 == n * n) {
      exps[cell] = static_cast<std::uint16_t>(rest);
      emit();
      exps[cell] = 0;
      return;
    }
    for (std::uint32_t e = 0; e <= rest; ++e) {
      exps[cell] = static_cast<std::uint16_t>(e);
      self(self, cell + 1, rest - e);
    }
    exps[cell] = 0;
  };
  if (n == 0) throw std::invalid_argument("to_dp_element: n must be positive");
  if (n * n == 1) {
    exps[0] = static_cast<std::uint16_t>(r);
    emit();
  } else {
    rec(rec, 0, r);
  }
  return out;
}

/// Multi-slot version for an S_alpha-symmetric sum: coefficients on the
/// variables xq[i,j], slot q hosting the positions of block q.
inline DPElement to_dp_element_multi(const PermClassSum& u, const YoungData& young,
                                     std::uint32_t n, VarSetPtr vars = nullptr) {
  const PrimeCtx& ctx = u.ctx();
  std::uint32_t m = young.slots();
  if (!vars) vars = matrix_varset(n, m);

  DPElement out(vars, ctx);
  // Exponent tensors: per slot q an exponent matrix summing to alpha_q.
  std::vector<std::uint16_t> exps(static_cast<std::size_t>(m) * n * n, 0);

  auto emit = [&]() {
    BasisTuple t;
    std::vector<DPMonomial::Entry> entries;
    for (std::uint32_t q = 0; q < m; ++q)
      for (std::uint32_t cell = 0; cell < n * n; ++cell) {
        std::uint16_t e = exps[q * n * n + cell];
        if (!e) continue;
        entries.push_back({static_cast<std::uint16_t>(q * n * n + cell), e});
        for (std::uint16_t k = 0; k < e; ++k) {
          t.i.push_back(cell / n);
          t.j.push_back(cell % n);
        }
      }
    Residue c = eval_class_sum(u, t);
    if (c) out.add_term(DPMonomial(std::move(entries)), c);
  };

  auto rec = [&](auto&& self, std::uint32_t q, std::uint32_t cell, std::uint32_t rest) -> void {
    if (q == m) {
      emit();
      return;
    }
    std::uint32_t ncells = n * n;
    if (cell + 1 == ncells) {
      exps[q * ncells + cell] = static_cast<std::uint16_t>(rest);
      self(self, q + 1, 0, q + 1 < m ? young.alpha()[q + 1] : 0);
      exps[q * ncells + cell] = 0;
      return;
    }
    for (std::uint32_t e = 0; e <= rest; ++e) {
      exps[q * ncells + cell] = static_cast<std::uint16_t>(e);
      self(self, q, cell + 1, rest - e);
    }
    exps[q * ncells + cell] = 0;
  };
  rec(rec, 0, 0, m ? young.alpha()[0] : 0);
  return out;
}

/// Partial polarisation of a plain polynomial of multidegree alpha: the
/// multilinear functional P_alpha(f).  On a basis tuple arranged along the
/// blocks of alpha its value is t! * (coefficient of x^t in f), where t is
/// the per-slot content of the tuple.
class PolarisedFunctional {
 public:
  PolarisedFunctional(PlainPoly f, YoungData young, std::uint32_t n)
      : f_(std::move(f)), young_(std::move(young)), n_(n) {
    // Homogeneity check: every term has multidegree alpha.
    for (const auto& [mono, c] : f_.terms()) {
      std::vector<std::uint32_t> deg(young_.slots(), 0);
      for (const auto& [v, e] : mono.entries())
        deg[static_cast<std::uint32_t>(v) / (n_ * n_)] += e;
      for (std::uint32_t q = 0; q < young_.slots(); ++q)
        if (deg[q] != young_.alpha()[q])
          throw std::invalid_argument("PolarisedFunctional: input not multihomogeneous");
    }
  }

  std::uint32_t r() const { return young_.r(); }

  Residue eval(const BasisTuple& t) const {
    if (t.r() != young_.r()) throw std::invalid_argument("PolarisedFunctional: tuple length");
    const PrimeCtx& ctx = f_.ctx();
    // Content per (slot, cell).
    std::map<std::uint16_t, std::uint16_t> content;
    for (std::uint32_t l = 0; l < t.r(); ++l) {
      std::uint32_t q = young_.block_of(l);
      std::uint16_t v = static_cast<std::uint16_t>(q * n_ * n_ + t.i[l] * n_ + t.j[l]);
      ++content[v];
    }
    std::vector<DPMonomial::Entry> entries(content.begin(), content.end());
    DPMonomial mono{entries};
    Residue c = f_.coefficient(mono);
    if (!c) return 0;
    for (const auto& [v, e] : entries) c = ctx.mul(c, factorial_mod_p(e, ctx));
    return c;
  }

 private:
  PlainPoly f_;
  YoungData young_;
  std::uint32_t n_;
};

/// Full polarisation = partial polarisation along alpha = (r), m = 1.
inline PolarisedFunctional polarise(const PlainPoly& f, std::uint32_t r, std::uint32_t n) {
  return PolarisedFunctional(f, YoungData({r}), n);
}

inline PolarisedFunctional polarise(const PlainPoly& f, const YoungData& young, std::uint32_t n) {
  return PolarisedFunctional(f, young, n);
}

} // namespace dpinv

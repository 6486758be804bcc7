#pragma once

/// \file invsolver.hpp
/// Brute-force invariants in explicit graded modules.
///
/// Group invariance is decided by the generator criterion: a vector is
/// GL_n-invariant iff it has torus weight exactly zero and is annihilated
/// by every t^m-coefficient operator (m >= 1) of the one-parameter root
/// subgroups I + tE_{ab}; over an infinite field a polynomial identity in
/// t holds iff all coefficients vanish.  Lie-algebra invariance keeps the
/// t^1 operators only and asks for weight zero mod p at the chosen
/// diagonal generators.
///
/// Every operator shifts the exact torus weight uniformly, so the kernel
/// computation decomposes over exact-weight blocks; that decomposition is
/// what keeps the larger modules fast.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "dpinv/divpow.hpp"
#include "dpinv/linalg.hpp"
#include "dpinv/modarith.hpp"

namespace dpinv {

enum class ModuleKind {
  TruncAs,     // A_s^r(gl_n): plain monomials, exponents < p^s
  DividedConj, // D_s^alpha((gl_n^{+m})^*): divided monomials, conjugation
  VecCovec,    // D_s^{r1,r2}(W^*): divided monomials, vector/covector action
  Tensor       // full tensor space gl_n^{x r}, basis E_{i_1 j_1} x ... x E_{i_r j_r}
};

struct ModuleSpec {
  ModuleKind kind;
  PrimeCtx ctx;
  std::uint32_t n = 1;
  std::uint32_t s = 1;              // exponent bound p^s where applicable
  std::vector<std::uint32_t> alpha; // TruncAs/SymTensor: {r}; DividedConj: per-slot degrees
  std::uint32_t m1 = 0, m2 = 0;     // VecCovec slots
  std::uint32_t r1 = 0, r2 = 0;     // VecCovec bidegree
  std::uint64_t basis_cap = 200000;

  static ModuleSpec trunc_as(const PrimeCtx& ctx, std::uint32_t s, std::uint32_t n,
                             std::uint32_t r) {
    ModuleSpec sp{ModuleKind::TruncAs, ctx};
    sp.n = n;
    sp.s = s;
    sp.alpha = {r};
    return sp;
  }
  static ModuleSpec divided_ds(const PrimeCtx& ctx, std::uint32_t s, std::uint32_t n,
                               std::uint32_t r) {
    ModuleSpec sp{ModuleKind::DividedConj, ctx};
    sp.n = n;
    sp.s = s;
    sp.alpha = {r};
    return sp;
  }
  static ModuleSpec divided_several(const PrimeCtx& ctx, std::uint32_t s, std::uint32_t n,
                                    std::vector<std::uint32_t> alpha) {
    ModuleSpec sp{ModuleKind::DividedConj, ctx};
    sp.n = n;
    sp.s = s;
    sp.alpha = std::move(alpha);
    return sp;
  }
  static ModuleSpec vec_covec(const PrimeCtx& ctx, std::uint32_t s, std::uint32_t n,
                              std::uint32_t m1, std::uint32_t m2, std::uint32_t r1,
                              std::uint32_t r2) {
    ModuleSpec sp{ModuleKind::VecCovec, ctx};
    sp.n = n;
    sp.s = s;
    sp.m1 = m1;
    sp.m2 = m2;
    sp.r1 = r1;
    sp.r2 = r2;
    return sp;
  }
  static ModuleSpec tensor(const PrimeCtx& ctx, std::uint32_t n, std::uint32_t r) {
    ModuleSpec sp{ModuleKind::Tensor, ctx};
    sp.n = n;
    sp.alpha = {r};
    return sp;
  }
};

struct ActionTerm {
  std::uint32_t tdeg;
  std::uint32_t target;
  Residue coeff;
};

class GradedModule {
 public:
  explicit GradedModule(ModuleSpec spec) : spec_(std::move(spec)) {
    const auto& sp = spec_;
    if (sp.n < 1) throw std::invalid_argument("GradedModule: n >= 1");
    exp_bound_ = UINT32_MAX;
    if (sp.kind != ModuleKind::Tensor) {
      exp_bound_ = 1;
      for (std::uint32_t k = 0; k < sp.s; ++k) {
        exp_bound_ *= sp.ctx.p();
        if (exp_bound_ > 1u << 16) throw std::invalid_argument("GradedModule: p^s too large");
      }
    }
    build_vars();
    enumerate_basis();
    weights_.reserve(basis_.size());
    for (const auto& e : basis_) weights_.push_back(monomial_weight(e));
  }

  const ModuleSpec& spec() const { return spec_; }
  std::size_t dim() const { return basis_.size(); }
  std::size_t nvars() const { return var_weight_.size(); }
  const std::vector<std::uint16_t>& exponents(std::size_t idx) const { return basis_.at(idx); }
  const std::vector<std::int32_t>& weight(std::size_t idx) const { return weights_.at(idx); }
  std::uint32_t exp_bound() const { return exp_bound_; }

  /// The matching VarSet (conjugation and vec/covec kinds).
  VarSetPtr varset() const { return varset_; }

  std::optional<std::size_t> index_of(const std::vector<std::uint16_t>& exps) const {
    auto it = std::lower_bound(basis_.begin(), basis_.end(), exps);
    if (it == basis_.end() || *it != exps) return std::nullopt;
    return static_cast<std::size_t>(it - basis_.begin());
  }

  std::string label(std::size_t idx) const {
    const auto& e = basis_.at(idx);
    std::ostringstream os;
    if (spec_.kind == ModuleKind::Tensor) {
      // e is the word of cells, one tensor factor per position.
      if (e.empty()) return "1";
      for (std::size_t l = 0; l < e.size(); ++l) {
        if (l) os << 'x';
        os << var_name(e[l]);
      }
      return os.str();
    }
    bool first = true;
    for (std::size_t v = 0; v < e.size(); ++v) {
      if (!e[v]) continue;
      if (!first) os << '*';
      first = false;
      os << var_name(v);
      if (spec_.kind == ModuleKind::TruncAs) {
        if (e[v] > 1) os << '^' << e[v];
      } else {
        os << "^(" << e[v] << ')';
      }
    }
    if (first) os << '1';
    return os.str();
  }

  /// All ordered root pairs (a, b), a != b, 0-based.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> all_roots() const {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    for (std::uint32_t a = 0; a < spec_.n; ++a)
      for (std::uint32_t b = 0; b < spec_.n; ++b)
        if (a != b) out.push_back({a, b});
    return out;
  }

  std::vector<std::pair<std::uint32_t, std::uint32_t>> upper_borel_roots() const {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    for (std::uint32_t a = 0; a < spec_.n; ++a)
      for (std::uint32_t b = a + 1; b < spec_.n; ++b) out.push_back({a, b});
    return out;
  }

  /// Full t-expansion of the root action on basis vector `col`; terms with
  /// tdeg >= 1 only.
  std::vector<ActionTerm> expand_root_column(std::uint32_t a, std::uint32_t b,
                                             std::size_t col) const {
    if (spec_.kind == ModuleKind::Tensor) return expand_tensor_column(a, b, col, false);
    return expand_poly_column(a, b, col, false);
  }

  /// t^1 coefficient only (the Lie derivation).
  std::vector<ActionTerm> derivation_column(std::uint32_t a, std::uint32_t b,
                                            std::size_t col) const {
    if (spec_.kind == ModuleKind::Tensor) return expand_tensor_column(a, b, col, true);
    return derivation_poly_column(a, b, col);
  }

 private:
  struct SubTerm {
    std::uint32_t tdeg;
    std::uint32_t var;
    Residue coeff; // +-1 stored mod p
  };

  void build_vars() {
    const auto& sp = spec_;
    std::uint32_t n = sp.n;
    switch (sp.kind) {
      case ModuleKind::TruncAs:
      case ModuleKind::DividedConj: {
        std::uint32_t m = static_cast<std::uint32_t>(sp.alpha.size());
        varset_ = matrix_varset(n, m);
        for (std::uint32_t q = 0; q < m; ++q)
          for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j = 0; j < n; ++j) {
              std::vector<std::int32_t> w(n, 0);
              w[i] += 1;
              w[j] -= 1;
              var_weight_.push_back(std::move(w));
              var_slot_.push_back(q);
            }
        break;
      }
      case ModuleKind::VecCovec: {
        varset_ = vec_covec_varset(n, sp.m1, sp.m2);
        for (std::uint32_t i = 0; i < sp.m1; ++i)
          for (std::uint32_t a = 0; a < n; ++a) {
            std::vector<std::int32_t> w(n, 0);
            w[a] -= 1;
            var_weight_.push_back(std::move(w));
            var_slot_.push_back(0); // vector side
          }
        for (std::uint32_t j = 0; j < sp.m2; ++j)
          for (std::uint32_t a = 0; a < n; ++a) {
            std::vector<std::int32_t> w(n, 0);
            w[a] += 1;
            var_weight_.push_back(std::move(w));
            var_slot_.push_back(1); // covector side
          }
        break;
      }
      case ModuleKind::Tensor: {
        varset_ = nullptr;
        for (std::uint32_t i = 0; i < n; ++i)
          for (std::uint32_t j = 0; j < n; ++j) {
            std::vector<std::int32_t> w(n, 0);
            w[i] += 1;
            w[j] -= 1;
            var_weight_.push_back(std::move(w));
            var_slot_.push_back(0);
          }
        break;
      }
    }
  }

  std::string var_name(std::size_t v) const {
    if (varset_) return varset_->name(v);
    std::uint32_t n = spec_.n;
    return "E[" + std::to_string(v / n + 1) + "," + std::to_string(v % n + 1) + "]";
  }

  void enumerate_basis() {
    const auto& sp = spec_;
    std::uint32_t n = sp.n;

    if (sp.kind == ModuleKind::Tensor) {
      // Words of length r over the n^2 cells, lexicographic.
      std::uint32_t r = sp.alpha[0];
      std::uint32_t cells = n * n;
      long double total = 1;
      for (std::uint32_t k = 0; k < r; ++k) total *= cells;
      if (total > static_cast<long double>(sp.basis_cap))
        throw std::runtime_error("GradedModule: basis cap exceeded");
      std::vector<std::uint16_t> word(r, 0);
      for (;;) {
        basis_.push_back(word);
        std::uint32_t k = r;
        while (k > 0) {
          if (++word[k - 1] < cells) break;
          word[k - 1] = 0;
          --k;
        }
        if (k == 0) break;
      }
      std::sort(basis_.begin(), basis_.end());
      return;
    }

    std::vector<std::uint16_t> cur(nvars(), 0);

    auto push = [&]() {
      if (basis_.size() >= sp.basis_cap)
        throw std::runtime_error("GradedModule: basis cap exceeded");
      basis_.push_back(cur);
    };

    if (sp.kind == ModuleKind::VecCovec) {
      std::uint32_t nx = sp.m1 * n;
      auto rec = [&](auto&& self, std::size_t v, std::uint32_t restx,
                     std::uint32_t resty) -> void {
        if (v == cur.size()) {
          if (restx == 0 && resty == 0) push();
          return;
        }
        bool xside = v < nx;
        std::uint32_t rest = xside ? restx : resty;
        std::uint32_t limit = std::min<std::uint32_t>(rest, exp_bound_ - 1);
        // If the remaining variables of this side cannot absorb the rest,
        // prune happens automatically at the end.
        for (std::uint32_t e = 0; e <= limit; ++e) {
          cur[v] = static_cast<std::uint16_t>(e);
          self(self, v + 1, xside ? restx - e : restx, xside ? resty : resty - e);
        }
        cur[v] = 0;
      };
      rec(rec, 0, sp.r1, sp.r2);
    } else {
      // Slot-constrained enumeration: per-slot degree alpha_q (TruncAs and
      // SymTensor have one slot).
      std::uint32_t m = static_cast<std::uint32_t>(sp.alpha.size());
      std::uint32_t per_slot = n * n;
      auto rec = [&](auto&& self, std::uint32_t q, std::uint32_t v_in_slot,
                     std::uint32_t rest) -> void {
        if (q == m) {
          push();
          return;
        }
        std::size_t v = static_cast<std::size_t>(q) * per_slot + v_in_slot;
        if (v_in_slot + 1 == per_slot) {
          std::uint32_t e = rest;
          if (e < exp_bound_) {
            cur[v] = static_cast<std::uint16_t>(e);
            self(self, q + 1, 0, q + 1 < m ? sp.alpha[q + 1] : 0);
            cur[v] = 0;
          }
          return;
        }
        std::uint32_t limit = std::min<std::uint32_t>(rest, exp_bound_ - 1);
        for (std::uint32_t e = 0; e <= limit; ++e) {
          cur[v] = static_cast<std::uint16_t>(e);
          self(self, q, v_in_slot + 1, rest - e);
        }
        cur[v] = 0;
      };
      rec(rec, 0, 0, m ? sp.alpha[0] : 0);
    }
    std::sort(basis_.begin(), basis_.end());
  }

  std::vector<std::int32_t> monomial_weight(const std::vector<std::uint16_t>& exps) const {
    std::vector<std::int32_t> w(spec_.n, 0);
    if (spec_.kind == ModuleKind::Tensor) {
      for (std::uint16_t cell : exps) {
        const auto& vw = var_weight_[cell];
        for (std::uint32_t c = 0; c < spec_.n; ++c) w[c] += vw[c];
      }
      return w;
    }
    for (std::size_t v = 0; v < exps.size(); ++v) {
      if (!exps[v]) continue;
      const auto& vw = var_weight_[v];
      for (std::uint32_t c = 0; c < spec_.n; ++c) w[c] += exps[v] * vw[c];
    }
    return w;
  }

  /// Substitution of variable v under I + tE_{ab}, including the t^0 term.
  std::vector<SubTerm> substitution(std::uint32_t a, std::uint32_t b, std::size_t v) const {
    const PrimeCtx& ctx = spec_.ctx;
    std::uint32_t n = spec_.n;
    Residue one = ctx.reduce(1), minus = ctx.neg(1);
    std::vector<SubTerm> out;
    out.push_back({0, static_cast<std::uint32_t>(v), one});
    switch (spec_.kind) {
      case ModuleKind::TruncAs:
      case ModuleKind::DividedConj: {
        std::uint32_t q = var_slot_[v];
        std::uint32_t cell = static_cast<std::uint32_t>(v) - q * n * n;
        std::uint32_t i = cell / n, j = cell % n;
        // x[i,j] o (I - tE_ab) X (I + tE_ab)
        if (j == b) out.push_back({1, q * n * n + i * n + a, one});
        if (i == a) out.push_back({1, q * n * n + b * n + j, minus});
        if (i == a && j == b) out.push_back({2, q * n * n + b * n + a, minus});
        break;
      }
      case ModuleKind::VecCovec: {
        std::uint32_t nx = spec_.m1 * n;
        if (v < nx) {
          std::uint32_t c = static_cast<std::uint32_t>(v) % n;
          if (c == a) out.push_back({1, static_cast<std::uint32_t>(v) - a + b, minus});
        } else {
          std::uint32_t c = static_cast<std::uint32_t>(v - nx) % n;
          if (c == b) out.push_back({1, static_cast<std::uint32_t>(v) - b + a, one});
        }
        break;
      }
      case ModuleKind::Tensor: {
        std::uint32_t i = static_cast<std::uint32_t>(v) / n, j = static_cast<std::uint32_t>(v) % n;
        // (I + tE_ab) E_ij (I - tE_ab)
        if (i == b) out.push_back({1, a * n + j, one});
        if (j == a) out.push_back({1, i * n + b, minus});
        if (i == b && j == a) out.push_back({2, a * n + b, minus});
        break;
      }
    }
    return out;
  }

  struct StateKey {
    std::uint32_t tdeg;
    std::vector<std::uint16_t> exps;
    bool operator==(const StateKey& o) const { return tdeg == o.tdeg && exps == o.exps; }
  };
  struct StateKeyHash {
    std::size_t operator()(const StateKey& k) const {
      std::size_t h = 1469598103934665603ull ^ k.tdeg;
      for (std::uint16_t e : k.exps) {
        h ^= e + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      }
      return h;
    }
  };
  using State = std::unordered_map<StateKey, Residue, StateKeyHash>;

  /// Full expansion for the polynomial-type kinds.  `plain` multiplication
  /// for TruncAs (multinomials, truncation), divided for the others
  /// (composition rule, Lucas binomials on merges).
  std::vector<ActionTerm> expand_poly_column(std::uint32_t a, std::uint32_t b, std::size_t col,
                                             bool derivation_only) const {
    const PrimeCtx& ctx = spec_.ctx;
    bool plain = spec_.kind == ModuleKind::TruncAs;
    const auto& exps = basis_[col];

    State state;
    state.emplace(StateKey{0, std::vector<std::uint16_t>(nvars(), 0)}, ctx.reduce(1));

    for (std::size_t v = 0; v < exps.size(); ++v) {
      if (!exps[v]) continue;
      std::uint32_t e = exps[v];
      auto subs = substitution(a, b, v);

      // Pieces of (subst_v)^e resp. gamma_e(subst_v): compositions of e
      // over the substitution terms.
      struct Piece {
        std::uint32_t tdeg;
        std::vector<std::pair<std::uint32_t, std::uint16_t>> exps; // (var, exp)
        Residue coeff;
      };
      std::vector<Piece> pieces;
      std::vector<std::uint32_t> comp(subs.size(), 0);
      auto emit_piece = [&]() {
        Piece pc{0, {}, ctx.reduce(1)};
        std::vector<std::uint64_t> parts;
        for (std::size_t q = 0; q < subs.size(); ++q) {
          if (!comp[q]) continue;
          pc.tdeg += subs[q].tdeg * comp[q];
          pc.exps.push_back({subs[q].var, static_cast<std::uint16_t>(comp[q])});
          pc.coeff = ctx.mul(pc.coeff, ctx.pow(subs[q].coeff, comp[q]));
          parts.push_back(comp[q]);
        }
        if (plain) pc.coeff = ctx.mul(pc.coeff, multinomial_mod_p(parts, ctx));
        if (pc.coeff) pieces.push_back(std::move(pc));
      };
      auto gen = [&](auto&& self, std::size_t q, std::uint32_t rest) -> void {
        if (q + 1 == subs.size()) {
          comp[q] = rest;
          emit_piece();
          comp[q] = 0;
          return;
        }
        for (std::uint32_t k = 0; k <= rest; ++k) {
          comp[q] = k;
          self(self, q + 1, rest - k);
        }
        comp[q] = 0;
      };
      gen(gen, 0, e);

      State next;
      next.reserve(state.size() * pieces.size() / 2 + 4);
      for (const auto& [key, c] : state) {
        for (const auto& pc : pieces) {
          Residue coeff = ctx.mul(c, pc.coeff);
          if (!coeff) continue;
          StateKey nk{key.tdeg + pc.tdeg, key.exps};
          bool dead = false;
          for (const auto& [w, k] : pc.exps) {
            std::uint32_t merged = nk.exps[w] + k;
            if (!plain) coeff = ctx.mul(coeff, binom_mod_p(merged, k, ctx));
            if (merged >= exp_bound_) {
              if (plain || coeff == 0) {
                dead = true;
                break;
              }
              throw std::logic_error("GradedModule: divided expansion left D_s");
            }
            if (!coeff) {
              dead = true;
              break;
            }
            nk.exps[w] = static_cast<std::uint16_t>(merged);
          }
          if (dead || !coeff) continue;
          auto [it, fresh] = next.emplace(std::move(nk), coeff);
          if (!fresh) {
            it->second = ctx.add(it->second, coeff);
            if (!it->second) next.erase(it);
          }
        }
      }
      state = std::move(next);
    }

    std::vector<ActionTerm> out;
    for (const auto& [key, c] : state) {
      if (key.tdeg == 0 || !c) continue;
      if (derivation_only && key.tdeg != 1) continue;
      auto idx = index_of(key.exps);
      if (!idx) throw std::logic_error("GradedModule: expansion target outside basis");
      out.push_back({key.tdeg, static_cast<std::uint32_t>(*idx), c});
    }
    sort_terms(out);
    return out;
  }

  /// Cheap Leibniz route for the t^1 coefficient.
  std::vector<ActionTerm> derivation_poly_column(std::uint32_t a, std::uint32_t b,
                                                 std::size_t col) const {
    const PrimeCtx& ctx = spec_.ctx;
    bool plain = spec_.kind == ModuleKind::TruncAs;
    const auto& exps = basis_[col];
    std::map<std::vector<std::uint16_t>, Residue> acc;

    for (std::size_t v = 0; v < exps.size(); ++v) {
      if (!exps[v]) continue;
      for (const auto& st : substitution(a, b, v)) {
        if (st.tdeg != 1) continue;
        std::vector<std::uint16_t> target(exps.begin(), exps.end());
        target[v] -= 1;
        Residue coeff = st.coeff;
        if (plain)
          coeff = ctx.mul(coeff, ctx.reduce(exps[v]));
        else
          coeff = ctx.mul(coeff, ctx.reduce(static_cast<std::int64_t>(target[st.var]) + 1));
        std::uint32_t merged = target[st.var] + 1u;
        if (merged >= exp_bound_ || coeff == 0) {
          if (!plain && coeff != 0)
            throw std::logic_error("GradedModule: derivation left D_s");
          continue;
        }
        target[st.var] = static_cast<std::uint16_t>(merged);
        auto [it, fresh] = acc.emplace(std::move(target), coeff);
        if (!fresh) {
          it->second = ctx.add(it->second, coeff);
          if (!it->second) acc.erase(it);
        }
      }
    }

    std::vector<ActionTerm> out;
    for (const auto& [t, c] : acc) {
      auto idx = index_of(t);
      if (!idx) throw std::logic_error("GradedModule: derivation target outside basis");
      out.push_back({1, static_cast<std::uint32_t>(*idx), c});
    }
    sort_terms(out);
    return out;
  }

  /// Tensor expansion: the product over positions of the per-factor
  /// substitution.
  std::vector<ActionTerm> expand_tensor_column(std::uint32_t a, std::uint32_t b, std::size_t col,
                                               bool derivation_only) const {
    const PrimeCtx& ctx = spec_.ctx;
    const auto& word = basis_[col];
    std::uint32_t r = static_cast<std::uint32_t>(word.size());

    std::map<std::pair<std::uint32_t, std::vector<std::uint16_t>>, Residue> acc;
    std::vector<std::uint16_t> target(r);
    auto rec = [&](auto&& self, std::uint32_t l, std::uint32_t tdeg, Residue coeff) -> void {
      if (!coeff) return;
      if (derivation_only && tdeg > 1) return;
      if (l == r) {
        if (tdeg == 0) return;
        auto [it, fresh] = acc.emplace(std::make_pair(tdeg, target), coeff);
        if (!fresh) {
          it->second = ctx.add(it->second, coeff);
          if (!it->second) acc.erase(it);
        }
        return;
      }
      for (const auto& st : substitution(a, b, word[l])) {
        target[l] = static_cast<std::uint16_t>(st.var);
        self(self, l + 1, tdeg + st.tdeg, ctx.mul(coeff, st.coeff));
      }
    };
    rec(rec, 0, 0, ctx.reduce(1));

    std::vector<ActionTerm> out;
    for (const auto& [key, c] : acc) {
      if (derivation_only && key.first != 1) continue;
      auto idx = index_of(key.second);
      if (!idx) throw std::logic_error("GradedModule: tensor target outside basis");
      out.push_back({key.first, static_cast<std::uint32_t>(*idx), c});
    }
    sort_terms(out);
    return out;
  }

  static void sort_terms(std::vector<ActionTerm>& terms) {
    std::sort(terms.begin(), terms.end(), [](const ActionTerm& x, const ActionTerm& y) {
      if (x.tdeg != y.tdeg) return x.tdeg < y.tdeg;
      return x.target < y.target;
    });
  }

  ModuleSpec spec_;
  std::uint32_t exp_bound_;
  VarSetPtr varset_;
  std::vector<std::vector<std::int32_t>> var_weight_;
  std::vector<std::uint32_t> var_slot_;
  std::vector<std::vector<std::uint16_t>> basis_;
  std::vector<std::vector<std::int32_t>> weights_;
};

/// A subspace in reduced row-echelon form over the module coordinates.
struct InvariantSubspace {
  std::size_t width = 0;
  std::uint32_t p = 2;
  std::vector<FpRow> rows; // RREF, pivot columns strictly increasing

  std::size_t dim() const { return rows.size(); }

  bool contains(FpRow v) const {
    PrimeCtx ctx(p);
    for (const auto& row : rows) {
      std::size_t pivot = 0;
      while (pivot < width && row[pivot] == 0) ++pivot;
      if (pivot < width && v[pivot])
        detail::axpy(v.data(), row.data(), ctx.p() - v[pivot], width, ctx.p());
    }
    for (std::size_t k = 0; k < width; ++k)
      if (v[k]) return false;
    return true;
  }
};

inline InvariantSubspace subspace_from_rows(std::size_t width, const PrimeCtx& ctx,
                                            const std::vector<FpRow>& rows) {
  RrefAccumulator acc(width, ctx);
  for (const auto& r : rows) acc.insert(r);
  return InvariantSubspace{width, ctx.p(), acc.reduced_rows()};
}

namespace detail {

struct RowKey {
  std::uint32_t root;
  std::uint32_t tdeg;
  std::uint32_t target;
  bool operator<(const RowKey& o) const {
    if (root != o.root) return root < o.root;
    if (tdeg != o.tdeg) return tdeg < o.tdeg;
    return target < o.target;
  }
};

/// Kernel of the stacked operators on one group of columns.
inline std::vector<FpRow> block_kernel(
    const GradedModule& M, const std::vector<std::uint32_t>& cols,
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& roots, bool derivation_only) {
  const PrimeCtx& ctx = M.spec().ctx;
  std::map<RowKey, std::map<std::uint32_t, Residue>> rows;
  for (std::uint32_t local = 0; local < cols.size(); ++local) {
    std::uint32_t col = cols[local];
    for (std::uint32_t ri = 0; ri < roots.size(); ++ri) {
      auto terms = derivation_only
                       ? M.derivation_column(roots[ri].first, roots[ri].second, col)
                       : M.expand_root_column(roots[ri].first, roots[ri].second, col);
      for (const auto& t : terms) rows[RowKey{ri, t.tdeg, t.target}][local] = t.coeff;
    }
  }
  RrefAccumulator acc(cols.size(), ctx);
  for (const auto& [key, entries] : rows) {
    FpRow row(cols.size(), 0);
    for (const auto& [local, c] : entries) row[local] = static_cast<std::uint8_t>(c);
    acc.insert(std::move(row));
  }
  std::vector<FpRow> kernel = acc.kernel_basis();
  // Embed into ambient coordinates.
  std::vector<FpRow> out;
  out.reserve(kernel.size());
  for (const auto& k : kernel) {
    FpRow v(M.dim(), 0);
    for (std::size_t l = 0; l < cols.size(); ++l) v[cols[l]] = k[l];
    out.push_back(std::move(v));
  }
  return out;
}

} // namespace detail

/// GL_n-invariants: torus weight exactly zero, all t^m operators vanish.
inline InvariantSubspace group_invariants(const GradedModule& M) {
  const PrimeCtx& ctx = M.spec().ctx;
  std::vector<std::uint32_t> cols;
  for (std::size_t i = 0; i < M.dim(); ++i) {
    bool zero = true;
    for (std::int32_t w : M.weight(i)) zero = zero && (w == 0);
    if (zero) cols.push_back(static_cast<std::uint32_t>(i));
  }
  auto kernel = detail::block_kernel(M, cols, M.all_roots(), false);
  return subspace_from_rows(M.dim(), ctx, kernel);
}

/// Generator choice for Lie-algebra invariants.
struct LieGenerators {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> roots;
  std::vector<std::uint32_t> diagonals;

  static LieGenerators all(std::uint32_t n) {
    LieGenerators g;
    for (std::uint32_t a = 0; a < n; ++a)
      for (std::uint32_t b = 0; b < n; ++b)
        if (a != b) g.roots.push_back({a, b});
    for (std::uint32_t a = 0; a < n; ++a) g.diagonals.push_back(a);
    return g;
  }

  /// Upper triangular matrices: E_ab for a < b plus the diagonal.
  static LieGenerators upper_borel(std::uint32_t n) {
    LieGenerators g;
    for (std::uint32_t a = 0; a < n; ++a)
      for (std::uint32_t b = a + 1; b < n; ++b) g.roots.push_back({a, b});
    for (std::uint32_t a = 0; a < n; ++a) g.diagonals.push_back(a);
    return g;
  }
};

/// Lie-algebra invariants: weight zero mod p at the chosen diagonals and
/// the t^1 derivations of the chosen roots vanish.  Solved per exact
/// weight block (every derivation shifts the exact weight).
inline InvariantSubspace lie_invariants(const GradedModule& M, const LieGenerators& gens) {
  const PrimeCtx& ctx = M.spec().ctx;
  std::map<std::vector<std::int32_t>, std::vector<std::uint32_t>> blocks;
  for (std::size_t i = 0; i < M.dim(); ++i) {
    const auto& w = M.weight(i);
    bool ok = true;
    for (std::uint32_t d : gens.diagonals) ok = ok && (ctx.reduce(w[d]) == 0);
    if (ok) blocks[w].push_back(static_cast<std::uint32_t>(i));
  }
  std::vector<FpRow> all_rows;
  for (const auto& [w, cols] : blocks) {
    auto kernel = detail::block_kernel(M, cols, gens.roots, true);
    for (auto& r : kernel) all_rows.push_back(std::move(r));
  }
  return subspace_from_rows(M.dim(), ctx, all_rows);
}

/// Coordinates of a divided element in the module basis.  Throws if a
/// monomial with nonzero coefficient falls outside the basis.
inline FpRow coords_of(const GradedModule& M, const DPElement& x) {
  if (M.spec().kind == ModuleKind::TruncAs || M.spec().kind == ModuleKind::Tensor)
    throw std::invalid_argument("coords_of: module kind does not take divided elements");
  FpRow v(M.dim(), 0);
  for (const auto& [mono, c] : x.terms()) {
    std::vector<std::uint16_t> exps(M.nvars(), 0);
    for (const auto& [var, e] : mono.entries()) exps.at(var) = e;
    auto idx = M.index_of(exps);
    if (!idx) throw std::invalid_argument("coords_of: monomial outside module basis");
    v[*idx] = static_cast<std::uint8_t>(c);
  }
  return v;
}

inline FpRow coords_of(const GradedModule& M, const PlainPoly& x) {
  if (M.spec().kind != ModuleKind::TruncAs)
    throw std::invalid_argument("coords_of: plain polynomials live in TruncAs modules");
  FpRow v(M.dim(), 0);
  for (const auto& [mono, c] : x.terms()) {
    std::vector<std::uint16_t> exps(M.nvars(), 0);
    for (const auto& [var, e] : mono.entries()) exps.at(var) = e;
    auto idx = M.index_of(exps);
    if (!idx) throw std::invalid_argument("coords_of: monomial outside module basis");
    v[*idx] = static_cast<std::uint8_t>(c);
  }
  return v;
}

template <typename Element>
inline InvariantSubspace span_subspace(const GradedModule& M, const std::vector<Element>& elems) {
  std::vector<FpRow> rows;
  rows.reserve(elems.size());
  for (const auto& e : elems) rows.push_back(coords_of(M, e));
  return subspace_from_rows(M.dim(), M.spec().ctx, rows);
}

struct SubspaceComparison {
  std::size_t dim_a = 0, dim_b = 0;
  bool a_in_b = false, b_in_a = false;
  bool equal() const { return a_in_b && b_in_a; }
};

inline SubspaceComparison subspace_compare(const InvariantSubspace& A,
                                           const InvariantSubspace& B) {
  if (A.width != B.width || A.p != B.p)
    throw std::invalid_argument("subspace_compare: ambient mismatch");
  SubspaceComparison cmp;
  cmp.dim_a = A.dim();
  cmp.dim_b = B.dim();
  cmp.a_in_b = true;
  for (const auto& row : A.rows) cmp.a_in_b = cmp.a_in_b && B.contains(row);
  cmp.b_in_a = true;
  for (const auto& row : B.rows) cmp.b_in_a = cmp.b_in_a && A.contains(row);
  return cmp;
}

/// Canonical text dump: one line per basis row, sparse terms in basis
/// order with coefficients in [0,p).
inline std::string dump_subspace(const GradedModule& M, const InvariantSubspace& S) {
  std::ostringstream os;
  for (const auto& row : S.rows) {
    bool first = true;
    for (std::size_t c = 0; c < S.width; ++c) {
      if (!row[c]) continue;
      if (!first) os << " + ";
      first = false;
      os << static_cast<unsigned>(row[c]) << '*' << M.label(c);
    }
    if (first) os << '0';
    os << '\n';
  }
  return os.str();
}

/// Restriction gl_n -> gl_{n-1} in coordinates: kill row/column n.
/// Supported for TruncAs (coordinate-ring side) and VecCovec (drop the
/// n-th coordinate of every vector and covector).
inline InvariantSubspace restrict_subspace(const GradedModule& from, const InvariantSubspace& S,
                                           const GradedModule& to) {
  const ModuleSpec& sf = from.spec();
  const ModuleSpec& st = to.spec();
  if (sf.kind != st.kind || sf.ctx != st.ctx || st.n + 1 != sf.n)
    throw std::invalid_argument("restrict_subspace: incompatible modules");
  if (sf.kind != ModuleKind::TruncAs && sf.kind != ModuleKind::VecCovec)
    throw std::invalid_argument("restrict_subspace: restriction defined for As and W modules");

  std::uint32_t n = sf.n, nt = st.n;
  // Map each source variable to its target variable or to "dropped".
  std::vector<std::optional<std::size_t>> var_map(from.nvars());
  if (sf.kind == ModuleKind::TruncAs) {
    std::uint32_t m = static_cast<std::uint32_t>(sf.alpha.size());
    for (std::uint32_t q = 0; q < m; ++q)
      for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = 0; j < n; ++j) {
          std::size_t v = static_cast<std::size_t>(q) * n * n + i * n + j;
          if (i < nt && j < nt) var_map[v] = static_cast<std::size_t>(q) * nt * nt + i * nt + j;
        }
  } else {
    for (std::uint32_t i = 0; i < sf.m1; ++i)
      for (std::uint32_t a = 0; a < n; ++a)
        if (a < nt) var_map[static_cast<std::size_t>(i) * n + a] =
            static_cast<std::size_t>(i) * nt + a;
    for (std::uint32_t j = 0; j < sf.m2; ++j)
      for (std::uint32_t a = 0; a < n; ++a)
        if (a < nt)
          var_map[static_cast<std::size_t>(sf.m1) * n + j * n + a] =
              static_cast<std::size_t>(sf.m1) * nt + j * nt + a;
  }

  std::vector<FpRow> rows;
  for (const auto& row : S.rows) {
    FpRow out(to.dim(), 0);
    bool nonzero = false;
    for (std::size_t c = 0; c < from.dim(); ++c) {
      if (!row[c]) continue;
      const auto& exps = from.exponents(c);
      std::vector<std::uint16_t> texp(to.nvars(), 0);
      bool dead = false;
      for (std::size_t v = 0; v < exps.size() && !dead; ++v) {
        if (!exps[v]) continue;
        if (!var_map[v]) dead = true;
        else texp[*var_map[v]] = exps[v];
      }
      if (dead) continue;
      auto idx = to.index_of(texp);
      if (!idx) throw std::logic_error("restrict_subspace: image outside target basis");
      PrimeCtx ctx(S.p);
      out[*idx] = static_cast<std::uint8_t>(ctx.add(out[*idx], row[c]));
      nonzero = nonzero || out[*idx];
    }
    rows.push_back(std::move(out));
  }
  return subspace_from_rows(to.dim(), sf.ctx, rows);
}

/// Element-level restriction on the coordinate-ring side.
inline PlainPoly restrict_plain(const PlainPoly& f, std::uint32_t n_from, std::uint32_t n_to,
                                const VarSetPtr& target_vars) {
  const PrimeCtx& ctx = f.ctx();
  std::uint32_t m = static_cast<std::uint32_t>(f.varset()->size() / (n_from * n_from));
  PlainPoly out(target_vars, ctx);
  for (const auto& [mono, c] : f.terms()) {
    std::vector<DPMonomial::Entry> entries;
    bool dead = false;
    for (const auto& [v, e] : mono.entries()) {
      std::uint32_t q = v / (n_from * n_from);
      std::uint32_t cell = v % (n_from * n_from);
      std::uint32_t i = cell / n_from, j = cell % n_from;
      if (i >= n_to || j >= n_to) {
        dead = true;
        break;
      }
      entries.push_back({static_cast<std::uint16_t>(q * n_to * n_to + i * n_to + j), e});
    }
    if (!dead) out.add_term(DPMonomial(std::move(entries)), c);
  }
  (void)m;
  return out;
}

} // namespace dpinv

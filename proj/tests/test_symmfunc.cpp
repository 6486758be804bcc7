#include <catch2/catch_amalgamated.hpp>

#include "dpinv/symmfunc.hpp"
#include "oracles/zform.hpp"

using namespace dpinv;
using dpinv::testing::BigInt;
using dpinv::testing::BigRat;
using dpinv::testing::QPoly;

namespace {

// Independent oracles over Q: traces built directly from walk sums and
// from the action on symmetric powers, with exact arithmetic.

QPoly trace_walks(std::uint32_t i, std::uint32_t n, const VarSetPtr& vs) {
  QPoly out = QPoly::zero(vs);
  std::vector<std::uint32_t> walk(i, 0);
  for (;;) {
    std::map<std::uint16_t, std::uint16_t> exps;
    for (std::uint32_t l = 0; l < i; ++l)
      ++exps[static_cast<std::uint16_t>(walk[l] * n + walk[(l + 1) % i])];
    std::vector<DPMonomial::Entry> entries(exps.begin(), exps.end());
    out.add_term(DPMonomial(std::move(entries)), 1);
    std::uint32_t k = 0;
    for (; k < i; ++k) {
      if (++walk[k] < n) break;
      walk[k] = 0;
    }
    if (k == i) break;
  }
  return out;
}

// tr(S^i X) on the monomial basis of S^i(k^n).
QPoly trace_sym_power(std::uint32_t i, std::uint32_t n, const VarSetPtr& vs) {
  // Weakly increasing tuples of length i over {0..n-1}.
  std::vector<std::vector<std::uint32_t>> basis;
  std::vector<std::uint32_t> cur;
  auto gen = [&](auto&& self, std::uint32_t start) -> void {
    if (cur.size() == i) {
      basis.push_back(cur);
      return;
    }
    for (std::uint32_t v = start; v < n; ++v) {
      cur.push_back(v);
      self(self, v);
      cur.pop_back();
    }
  };
  gen(gen, 0);

  QPoly out = QPoly::zero(vs);
  for (const auto& mu : basis) {
    // Coefficient of v^mu in prod_k (sum_a x[a, mu_k] v_a): sum over
    // assignments a with multiset(a) = mu.
    std::vector<std::uint32_t> assign(i, 0);
    auto rec = [&](auto&& self, std::uint32_t k) -> void {
      if (k == i) {
        std::vector<std::uint32_t> sorted(assign);
        std::sort(sorted.begin(), sorted.end());
        if (sorted != mu) return;
        std::map<std::uint16_t, std::uint16_t> exps;
        for (std::uint32_t l = 0; l < i; ++l)
          ++exps[static_cast<std::uint16_t>(assign[l] * n + mu[l])];
        std::vector<DPMonomial::Entry> entries(exps.begin(), exps.end());
        out.add_term(DPMonomial(std::move(entries)), 1);
        return;
      }
      for (std::uint32_t a = 0; a < n; ++a) {
        assign[k] = a;
        self(self, k + 1);
      }
    };
    rec(rec, 0);
  }
  return out;
}

QPoly elementary_exact(std::uint32_t i, std::uint32_t n, const VarSetPtr& vs) {
  QPoly acc = QPoly::zero(vs);
  if (i == 0) return QPoly::one(vs);
  if (i > n) return acc;
  std::vector<std::uint32_t> subset;
  auto rec = [&](auto&& self, std::uint32_t next) -> void {
    if (subset.size() == i) {
      std::vector<std::uint32_t> perm(i);
      std::iota(perm.begin(), perm.end(), 0u);
      do {
        int sign = 1;
        for (std::uint32_t a = 0; a < i; ++a)
          for (std::uint32_t b = a + 1; b < i; ++b)
            if (perm[a] > perm[b]) sign = -sign;
        QPoly term = QPoly::one(vs);
        for (std::uint32_t k = 0; k < i; ++k)
          term = term * QPoly::variable(vs, subset[k] * n + subset[perm[k]]);
        acc = acc + term.scaled(sign);
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

// PlainPoly -> comparison against a QPoly reduced mod p.
bool plain_equals_exact(const PlainPoly& got, const QPoly& exact) {
  const PrimeCtx& ctx = got.ctx();
  PlainPoly reduced = PlainPoly::zero(got.varset(), ctx);
  for (const auto& [m, c] : exact.terms()) {
    BigInt num = numerator(c), den = denominator(c);
    if (den != 1) return false;
    BigInt rem = num % ctx.p();
    long long v = static_cast<long long>(rem);
    reduced.add_term(m, ctx.reduce(v));
  }
  return got == reduced;
}

} // namespace

TEST_CASE("elementary symmetric functions of a matrix") {
  PrimeCtx f5(5);
  auto mc = make_matrix_ctx(2, f5);
  PlainPoly e1 = elementary_e_plain(1, mc);
  CHECK(e1.coefficient(DPMonomial({{0, 1}})) == 1); // x[1,1]
  CHECK(e1.coefficient(DPMonomial({{3, 1}})) == 1); // x[2,2]
  CHECK(e1.terms().size() == 2);

  PlainPoly e2 = elementary_e_plain(2, mc);
  CHECK(e2.coefficient(DPMonomial({{0, 1}, {3, 1}})) == 1);
  CHECK(e2.coefficient(DPMonomial({{1, 1}, {2, 1}})) == f5.neg(1));

  // Signs collapse mod 2.
  PrimeCtx f2(2);
  auto mc2 = make_matrix_ctx(2, f2);
  PlainPoly e2p2 = elementary_e_plain(2, mc2);
  CHECK(e2p2.coefficient(DPMonomial({{1, 1}, {2, 1}})) == 1);

  CHECK(elementary_e_plain(3, mc).is_zero()); // i > n
}

TEST_CASE("complete symmetric functions") {
  PrimeCtx f5(5);
  auto mc = make_matrix_ctx(2, f5);
  CHECK(complete_h_plain(1, mc) == elementary_e_plain(1, mc));
  {
    PlainPoly e1 = elementary_e_plain(1, mc);
    PlainPoly e2 = elementary_e_plain(2, mc);
    CHECK(complete_h_plain(2, mc) == e1 * e1 - e2);
  }
  {
    auto mc1 = make_matrix_ctx(1, f5);
    PlainPoly x = PlainPoly::variable(mc1.vars, f5, 0);
    CHECK(complete_h_plain(2, mc1) == x * x);
  }

  // Against the trace of the symmetric power, exactly.
  for (std::uint32_t p : {2u, 3u, 5u}) {
    PrimeCtx ctx(p);
    for (std::uint32_t n = 1; n <= 3; ++n) {
      auto mc2 = make_matrix_ctx(n, ctx);
      for (std::uint32_t i = 1; i <= 3; ++i)
        CHECK(plain_equals_exact(complete_h_plain(i, mc2), trace_sym_power(i, n, mc2.vars)));
    }
  }
}

TEST_CASE("power sums") {
  PrimeCtx f5(5);
  auto mc = make_matrix_ctx(2, f5);
  CHECK(power_p_plain(1, mc) == elementary_e_plain(1, mc));
  {
    PlainPoly p2 = power_p_plain(2, mc);
    CHECK(p2.coefficient(DPMonomial({{0, 2}})) == 1);
    CHECK(p2.coefficient(DPMonomial({{1, 1}, {2, 1}})) == 2);
    CHECK(p2.coefficient(DPMonomial({{3, 2}})) == 1);
  }
  {
    PrimeCtx f2(2);
    auto mc2 = make_matrix_ctx(2, f2);
    PlainPoly p2 = power_p_plain(2, mc2);
    CHECK(p2.coefficient(DPMonomial({{0, 2}})) == 1);
    CHECK(p2.coefficient(DPMonomial({{1, 1}, {2, 1}})) == 0); // cross term gone
    CHECK(p2.coefficient(DPMonomial({{3, 2}})) == 1);
  }
}

TEST_CASE("Newton's identity links p and e") {
  // p_i - e_1 p_{i-1} + ... + (-1)^{i-1} e_{i-1} p_1 + (-1)^i i e_i = 0.
  for (std::uint32_t p : {2u, 3u, 5u}) {
    PrimeCtx ctx(p);
    for (std::uint32_t n = 1; n <= 3; ++n) {
      auto mc = make_matrix_ctx(n, ctx);
      for (std::uint32_t i = 1; i <= 4; ++i) {
        PlainPoly acc = power_p_plain(i, mc);
        int sign = -1;
        for (std::uint32_t k = 1; k < i; ++k) {
          PlainPoly term = elementary_e_plain(k, mc) * power_p_plain(i - k, mc);
          acc = sign < 0 ? acc - term : acc + term;
          sign = -sign;
        }
        Residue ie = ctx.reduce(static_cast<std::int64_t>(i));
        PlainPoly last = elementary_e_plain(i, mc).scaled(ie);
        acc = sign < 0 ? acc - last : acc + last;
        CHECK(acc.is_zero());
      }
    }
  }
}

TEST_CASE("pattern functions") {
  PrimeCtx f5(5);
  auto mc = make_matrix_ctx(2, f5, 2);
  {
    // p_1 on [1,2] = tr(X1 X2) = sum_{a,b} x1[a,b] x2[b,a].
    DPElement got = pattern_function(SymKind::P, 1, CyclePattern({1, 2}), mc);
    DPElement expect = DPElement::zero(mc.vars, f5);
    for (std::uint32_t a = 1; a <= 2; ++a)
      for (std::uint32_t b = 1; b <= 2; ++b) {
        DPElement x1 = DPElement::variable(mc.vars, f5, matrix_var_index(mc, 1, a, b));
        DPElement x2 = DPElement::variable(mc.vars, f5, matrix_var_index(mc, 2, b, a));
        expect = expect + x1 * x2;
      }
    CHECK(got == expect);
  }
  {
    auto mc1 = make_matrix_ctx(2, f5, 1);
    CHECK(pattern_function(SymKind::P, 1, CyclePattern({1}), mc1) == power_p(1, mc1));
  }
  {
    // Rotation invariance: tr-based functions agree on X1X2 and X2X1.
    SymbolicMatrix AB = matrix_product(generic_matrix(mc, 1), generic_matrix(mc, 2));
    SymbolicMatrix BA = matrix_product(generic_matrix(mc, 2), generic_matrix(mc, 1));
    for (std::uint32_t i = 1; i <= 2; ++i) {
      CHECK(e_of_matrix(i, AB, mc) == e_of_matrix(i, BA, mc));
      CHECK(h_of_matrix(i, AB, mc) == h_of_matrix(i, BA, mc));
      CHECK(p_of_matrix(i, AB, mc) == p_of_matrix(i, BA, mc));
    }
  }
}

TEST_CASE("divided families") {
  PrimeCtx f2(2);
  auto mc = make_matrix_ctx(2, f2);
  CHECK(divided_family(Partition({1}), SymKind::E, mc) == elementary_e(1, mc));
  CHECK(divided_family(Partition({2, 2}), SymKind::E, mc) == dp_gamma(2, elementary_e(2, mc)));

  {
    // divided p_{(2,1)} at p=2, n=3: class-sum route vs exact integers.
    PrimeCtx ctx(2);
    auto mc3 = make_matrix_ctx(3, ctx);
    DPElement via_class = divided_family(Partition({2, 1}), SymKind::P, mc3);
    DPElement via_zform = dpinv::detail::divided_p_zform(Partition({2, 1}), mc3);
    CHECK(via_class == via_zform);

    // And against the exact rational oracle (1/z) p_lambda.
    QPoly p2 = trace_walks(2, 3, mc3.vars);
    QPoly p1 = trace_walks(1, 3, mc3.vars);
    QPoly divided = (p2 * p1).scaled(BigRat(1, 2)); // z_{(2,1)} = 2
    CHECK(via_class == divided.to_divided_mod_p(ctx));
  }
}

TEST_CASE("divided families against exact rational oracles") {
  for (std::uint32_t p : {2u, 3u}) {
    PrimeCtx ctx(p);
    for (std::uint32_t r = 1; r <= 4; ++r) {
      std::uint32_t n = r;
      auto mc = make_matrix_ctx(n, ctx);
      for (const Partition& lam : enumerate_partitions(r)) {
        auto orders = centraliser_orders(lam);

        QPoly pl = QPoly::one(mc.vars);
        QPoly el = QPoly::one(mc.vars);
        QPoly hl = QPoly::one(mc.vars);
        for (std::uint32_t part : lam.parts()) {
          pl = pl * trace_walks(part, n, mc.vars);
          el = el * elementary_exact(part, n, mc.vars);
          hl = hl * trace_sym_power(part, n, mc.vars);
        }

        CHECK(divided_p(lam, mc) ==
              pl.scaled(BigRat(1) / BigRat(orders.z)).to_divided_mod_p(ctx));
        CHECK(divided_family(lam, SymKind::E, mc) ==
              el.scaled(BigRat(1) / BigRat(orders.u)).to_divided_mod_p(ctx));
        CHECK(divided_family(lam, SymKind::H, mc) ==
              hl.scaled(BigRat(1) / BigRat(orders.u)).to_divided_mod_p(ctx));
      }
    }
  }
}

TEST_CASE("divided family membership in D_s") {
  for (std::uint32_t p : {2u, 3u}) {
    PrimeCtx ctx(p);
    for (std::uint32_t s = 1; s <= 2; ++s) {
      std::uint64_t ps = 1;
      for (std::uint32_t k = 0; k < s; ++k) ps *= p;
      for (std::uint32_t r = 1; r <= 4; ++r) {
        auto mc = make_matrix_ctx(r, ctx);
        for (const Partition& lam :
             enumerate_partitions(r, {}, static_cast<std::uint32_t>(ps))) {
          CHECK(divided_family(lam, SymKind::E, mc).is_in_Ds(s));
          CHECK(divided_family(lam, SymKind::H, mc).is_in_Ds(s));
        }
      }
    }
  }
}

TEST_CASE("e_4 equals gamma_2(e_2) on diagonals only (p=2, n=4)") {
  PrimeCtx f2(2);
  auto mc = make_matrix_ctx(4, f2);
  DPElement e4 = divided_family(Partition({4}), SymKind::E, mc);
  DPElement e22 = divided_family(Partition({2, 2}), SymKind::E, mc);
  CHECK(e4 != e22);

  std::vector<std::size_t> off_diag;
  for (std::uint32_t i = 1; i <= 4; ++i)
    for (std::uint32_t j = 1; j <= 4; ++j)
      if (i != j) off_diag.push_back(matrix_var_index(mc, 1, i, j));
  CHECK(e4.substitute_zero(off_diag) == e22.substitute_zero(off_diag));
}

TEST_CASE("multi-matrix divided families") {
  PrimeCtx f2(2);
  auto mc = make_matrix_ctx(2, f2, 2);
  {
    MultiPartition bl;
    bl.set(CyclePattern({1, 2}), Partition({1}));
    DPElement e = divided_family_multi(bl, SymKind::E, mc);
    CHECK(e == pattern_function(SymKind::E, 1, CyclePattern({1, 2}), mc));
    CHECK(divided_family_multi(bl, SymKind::H, mc) ==
          pattern_function(SymKind::H, 1, CyclePattern({1, 2}), mc));
  }
  {
    // divided p_boldlambda via the S_alpha class sum matches the direct
    // pattern expansion for a single crossing 2-cycle: tr(X1 X2).
    YoungData young({1, 1});
    MultiPartition bl;
    bl.set(CyclePattern({1, 2}), Partition({1}));
    DPElement got = divided_p_multi(bl, young, mc);
    DPElement expect = pattern_function(SymKind::P, 1, CyclePattern({1, 2}), mc);
    CHECK(got == expect);
  }
  {
    // gamma exponent on e_{1,[j]} follows the ones of boldlambda([j]).
    MultiPartition bl;
    bl.set(CyclePattern({1}), Partition({1, 1}));
    bl.set(CyclePattern({2}), Partition({1}));
    DPElement e = divided_family_multi(bl, SymKind::E, mc);
    DPElement expect = dp_gamma(2, elementary_e(1, mc, 1)) * elementary_e(1, mc, 2);
    CHECK(e == expect);
  }
}

TEST_CASE("bracket functions") {
  PrimeCtx f3(3);
  {
    auto vc = make_vec_covec_ctx(1, 1, 1, f3);
    // n=1: single product x1[1] y1[1].
    DPElement b = bracket(1, 1, vc);
    REQUIRE(b.term_count() == 1);
  }
  {
    auto vc = make_vec_covec_ctx(2, 2, 2, f3);
    DPElement b11 = bracket(1, 1, vc);
    CHECK(b11.term_count() == 2);
    CHECK(b11.homogeneous_component(std::vector<std::int32_t>{1, 1}) == b11);
    // Pairwise distinct brackets.
    std::vector<DPElement> all;
    for (std::uint32_t i = 1; i <= 2; ++i)
      for (std::uint32_t j = 1; j <= 2; ++j) all.push_back(bracket(i, j, vc));
    for (std::size_t a = 0; a < all.size(); ++a)
      for (std::size_t b2 = a + 1; b2 < all.size(); ++b2) CHECK(all[a] != all[b2]);
    CHECK_THROWS_AS(bracket(3, 1, vc), std::out_of_range);
  }
}

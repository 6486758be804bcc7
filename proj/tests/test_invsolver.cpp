#include <catch2/catch_amalgamated.hpp>

#include "dpinv/invsolver.hpp"
#include "dpinv/symmfunc.hpp"

using namespace dpinv;

TEST_CASE("module construction") {
  PrimeCtx f2(2);
  {
    GradedModule M(ModuleSpec::trunc_as(f2, 1, 1, 0));
    CHECK(M.dim() == 1);
    CHECK(M.label(0) == "1");
    CHECK(M.weight(0) == std::vector<std::int32_t>{0});
  }
  {
    GradedModule M(ModuleSpec::trunc_as(f2, 1, 2, 1));
    CHECK(M.dim() == 4);
    // weight of x[1,2] is (+1,-1)
    auto idx = M.index_of({0, 1, 0, 0});
    REQUIRE(idx.has_value());
    CHECK(M.weight(*idx) == std::vector<std::int32_t>{1, -1});
  }
  {
    GradedModule M(ModuleSpec::divided_ds(f2, 1, 2, 2));
    CHECK(M.dim() == 6); // C(4,2) squarefree of degree 2
  }
  {
    GradedModule M(ModuleSpec::tensor(f2, 2, 3));
    CHECK(M.dim() == 64); // (n^2)^r words
  }
  {
    ModuleSpec sp = ModuleSpec::divided_ds(f2, 1, 3, 4);
    sp.basis_cap = 10;
    CHECK_THROWS_AS(GradedModule(sp), std::runtime_error);
  }
}

TEST_CASE("identity coefficient of the root expansion") {
  // rho_t at t = 0 is the identity: expansions only report tdeg >= 1 and
  // never touch t^0; spot-check that the t^1 part of the derivation
  // matches the full expansion.
  PrimeCtx f3(3);
  GradedModule M(ModuleSpec::divided_ds(f3, 1, 2, 3));
  for (std::size_t col = 0; col < M.dim(); ++col)
    for (auto [a, b] : M.all_roots()) {
      auto full = M.expand_root_column(a, b, col);
      auto der = M.derivation_column(a, b, col);
      std::map<std::uint32_t, Residue> t1;
      for (const auto& t : full)
        if (t.tdeg == 1) t1[t.target] = t.coeff;
      std::map<std::uint32_t, Residue> t1d;
      for (const auto& t : der) t1d[t.target] = t.coeff;
      CHECK(t1 == t1d);
    }
}

TEST_CASE("constants are invariant") {
  for (std::uint32_t p : {2u, 3u}) {
    PrimeCtx ctx(p);
    for (std::uint32_t n = 1; n <= 3; ++n) {
      GradedModule M(ModuleSpec::trunc_as(ctx, 1, n, 0));
      CHECK(group_invariants(M).dim() == 1);
      CHECK(lie_invariants(M, LieGenerators::all(n)).dim() == 1);
    }
  }
}

TEST_CASE("total invariants of A_1 for n = 2 equal (3p^2-p)/2") {
  for (std::uint32_t p : {2u, 3u}) {
    PrimeCtx ctx(p);
    std::uint32_t top = 4 * (p - 1);
    std::size_t total = 0;
    for (std::uint32_t r = 0; r <= top; ++r) {
      GradedModule M(ModuleSpec::trunc_as(ctx, 1, 2, r));
      total += group_invariants(M).dim();
    }
    CHECK(total == (3 * p * p - p) / 2);
  }
}

TEST_CASE("infinitesimal gap on the tensor cube") {
  PrimeCtx f2(2);
  GradedModule M(ModuleSpec::tensor(f2, 2, 3));
  InvariantSubspace lie = lie_invariants(M, LieGenerators::all(2));
  InvariantSubspace grp = group_invariants(M);
  CHECK(lie.dim() == 8);
  CHECK(grp.dim() == 5);
  auto cmp = subspace_compare(grp, lie);
  CHECK(cmp.a_in_b);
  CHECK_FALSE(cmp.b_in_a);

  // The witness (E11+E22) E12^(2): the symmetrisation of
  // (E11+E22) x E12 x E12.  Cells: E11=0, E12=1, E21=2, E22=3.
  FpRow v(M.dim(), 0);
  for (std::vector<std::uint16_t> word :
       {std::vector<std::uint16_t>{0, 1, 1}, {3, 1, 1}, {1, 0, 1}, {1, 3, 1}, {1, 1, 0},
        {1, 1, 3}}) {
    auto idx = M.index_of(word);
    REQUIRE(idx.has_value());
    v[*idx] = 1;
  }
  CHECK(lie.contains(v));
  CHECK_FALSE(grp.contains(v));
}

TEST_CASE("group invariants are Lie invariants; equality for r <= n") {
  for (std::uint32_t p : {2u, 3u}) {
    PrimeCtx ctx(p);
    for (std::uint32_t s = 1; s <= 2; ++s)
      for (std::uint32_t n = 1; n <= 3; ++n)
        for (std::uint32_t r = 0; r <= 3; ++r) {
          GradedModule M(ModuleSpec::divided_ds(ctx, s, n, r));
          InvariantSubspace grp = group_invariants(M);
          InvariantSubspace lie = lie_invariants(M, LieGenerators::all(n));
          auto cmp = subspace_compare(grp, lie);
          CHECK(cmp.a_in_b);
          if (r <= n) CHECK(cmp.equal());
        }
  }
}

TEST_CASE("class sums and divided families give the invariants of D_s") {
  PrimeCtx f2(2);
  std::uint32_t s = 1, n = 3, r = 3;
  GradedModule M(ModuleSpec::divided_ds(f2, s, n, r));
  InvariantSubspace inv = group_invariants(M);
  CHECK(inv.dim() == 2); // s-equivalence classes of partitions of 3 at p=2

  auto mc = make_matrix_ctx(n, f2);
  std::vector<DPElement> pfam, efam, hfam;
  for (const auto& cls : s_equivalence_classes(r, f2, s))
    pfam.push_back(divided_p_class_sum(cls, mc));
  for (const auto& lam : enumerate_partitions(r, {}, 2u)) {
    efam.push_back(divided_family(lam, SymKind::E, mc));
    hfam.push_back(divided_family(lam, SymKind::H, mc));
  }
  for (auto fam : {&pfam, &efam, &hfam}) {
    InvariantSubspace span = span_subspace(M, *fam);
    CHECK(span.dim() == fam->size());
    CHECK(subspace_compare(span, inv).equal());
  }
}

TEST_CASE("p-th powers are Lie invariants") {
  PrimeCtx f2(2);
  auto mc = make_matrix_ctx(2, f2);
  GradedModule M(ModuleSpec::trunc_as(f2, 2, 2, 2));
  PlainPoly e1sq = elementary_e_plain(1, mc) * elementary_e_plain(1, mc);
  InvariantSubspace lie = lie_invariants(M, LieGenerators::all(2));
  CHECK(lie.contains(coords_of(M, e1sq)));
}

TEST_CASE("tensor invariants against class sums") {
  // For n >= r the invariants of gl_n^{x r} are spanned by the E_pi and
  // have dimension r!.  Class sums always land inside the invariants.
  for (std::uint32_t p : {2u, 3u}) {
    PrimeCtx ctx(p);
    for (std::uint32_t r = 1; r <= 3; ++r)
      for (std::uint32_t n = r; n <= 3; ++n) {
        GradedModule T(ModuleSpec::tensor(ctx, n, r));
        InvariantSubspace grp = group_invariants(T);
        std::uint64_t rf = 1;
        for (std::uint32_t k = 2; k <= r; ++k) rf *= k;
        CHECK(grp.dim() == rf);
        for (const auto& lam : enumerate_partitions(r)) {
          PermClassSum u = class_sum_of_partition(lam, ctx);
          FpRow v(T.dim(), 0);
          for (std::size_t w = 0; w < T.dim(); ++w) {
            const auto& word = T.exponents(w);
            BasisTuple t;
            for (std::uint16_t cell : word) {
              t.i.push_back(cell / n);
              t.j.push_back(cell % n);
            }
            v[w] = static_cast<std::uint8_t>(eval_class_sum(u, t));
          }
          CHECK(grp.contains(v));
        }
      }
  }
}

TEST_CASE("tensor invariants restricted to symmetric tensors match D^r") {
  // (D^r)^G = (symmetric part of gl_n^{x r})^G: intersect the tensor
  // invariants with the symmetric subspace and compare dimensions with the
  // divided module.
  PrimeCtx f2(2);
  std::uint32_t n = 2, r = 3;
  GradedModule T(ModuleSpec::tensor(f2, n, r));
  GradedModule D(ModuleSpec::divided_ds(f2, 2, n, r));
  InvariantSubspace grp = group_invariants(T);

  // Symmetric subspace: orbit sums of words under position permutations.
  RrefAccumulator sym(T.dim(), f2);
  for (std::size_t w = 0; w < T.dim(); ++w) {
    std::vector<std::uint16_t> word(T.exponents(w));
    std::sort(word.begin(), word.end());
    if (word != T.exponents(w)) continue;
    FpRow v(T.dim(), 0);
    do {
      v[*T.index_of(word)] = 1;
    } while (std::next_permutation(word.begin(), word.end()));
    sym.insert(std::move(v));
  }
  // dim(intersection) = dim grp + dim sym - dim(grp + sym).
  RrefAccumulator sum(T.dim(), f2);
  for (const auto& row : grp.rows) sum.insert(row);
  std::size_t sym_dim = sym.rank();
  for (const auto& row : sym.reduced_rows()) sum.insert(row);
  std::size_t inter = grp.dim() + sym_dim - sum.rank();
  CHECK(inter == group_invariants(D).dim());
}

TEST_CASE("restriction of elements and subspaces") {
  PrimeCtx f2(2);
  {
    // e_2 for gl_3 restricts to e_2 for gl_2.
    auto mc3 = make_matrix_ctx(3, f2);
    auto mc2 = make_matrix_ctx(2, f2);
    PlainPoly e2_3 = elementary_e_plain(2, mc3);
    PlainPoly got = restrict_plain(e2_3, 3, 2, mc2.vars);
    CHECK(got == elementary_e_plain(2, mc2));
  }
  {
    // Anything involving row/column 3 dies.
    auto mc3 = make_matrix_ctx(3, f2);
    auto mc2 = make_matrix_ctx(2, f2);
    PlainPoly f = PlainPoly::variable(mc3.vars, f2, matrix_var_index(mc3, 1, 1, 3));
    CHECK(restrict_plain(f, 3, 2, mc2.vars).is_zero());
  }
  {
    // The degree-10 element is fixed by restriction of its own lift.
    auto mc3 = make_matrix_ctx(3, f2);
    auto mc2 = make_matrix_ctx(2, f2);
    auto mono = [&](const MatrixVarCtx& mc, std::uint32_t e11, std::uint32_t e12,
                    std::uint32_t e21, std::uint32_t e22) {
      std::vector<DPMonomial::Entry> ent;
      if (e11) ent.push_back({static_cast<std::uint16_t>(matrix_var_index(mc, 1, 1, 1)),
                              static_cast<std::uint16_t>(e11)});
      if (e12) ent.push_back({static_cast<std::uint16_t>(matrix_var_index(mc, 1, 1, 2)),
                              static_cast<std::uint16_t>(e12)});
      if (e21) ent.push_back({static_cast<std::uint16_t>(matrix_var_index(mc, 1, 2, 1)),
                              static_cast<std::uint16_t>(e21)});
      if (e22) ent.push_back({static_cast<std::uint16_t>(matrix_var_index(mc, 1, 2, 2)),
                              static_cast<std::uint16_t>(e22)});
      return DPMonomial(ent);
    };
    PlainPoly lift(mc3.vars, f2);
    lift.add_term(mono(mc3, 2, 3, 3, 2), 1);
    lift.add_term(mono(mc3, 3, 2, 2, 3), 1);
    PlainPoly down = restrict_plain(lift, 3, 2, mc2.vars);
    PlainPoly expect(mc2.vars, f2);
    expect.add_term(mono(mc2, 2, 3, 3, 2), 1);
    expect.add_term(mono(mc2, 3, 2, 2, 3), 1);
    CHECK(down == expect);
  }
  {
    // Subspace restriction A_1^1(gl_2) -> A_1^1(gl_1).
    GradedModule from(ModuleSpec::trunc_as(f2, 1, 2, 1));
    GradedModule to(ModuleSpec::trunc_as(f2, 1, 1, 1));
    InvariantSubspace S{from.dim(), 2, {}};
    FpRow row(from.dim(), 0);
    for (std::size_t c = 0; c < from.dim(); ++c) row[c] = 1; // x11+x12+x21+x22
    S.rows.push_back(row);
    InvariantSubspace down = restrict_subspace(from, S, to);
    CHECK(down.dim() == 1); // x11 survives
  }
}

TEST_CASE("subspace comparison") {
  PrimeCtx f3(3);
  InvariantSubspace A{3, 3, {}}, B{3, 3, {}};
  A.rows.push_back({1, 0, 2});
  B.rows.push_back({1, 0, 2});
  B.rows.push_back({0, 1, 1});
  auto cmp = subspace_compare(A, B);
  CHECK(cmp.dim_a == 1);
  CHECK(cmp.dim_b == 2);
  CHECK(cmp.a_in_b);
  CHECK_FALSE(cmp.b_in_a);
  CHECK_FALSE(cmp.equal());
  CHECK(subspace_compare(A, A).equal());
  InvariantSubspace C{4, 3, {}};
  CHECK_THROWS_AS(subspace_compare(A, C), std::invalid_argument);
}

TEST_CASE("deterministic output") {
  PrimeCtx f2(2);
  auto run = [&]() {
    GradedModule M(ModuleSpec::divided_ds(f2, 1, 3, 3));
    return dump_subspace(M, group_invariants(M));
  };
  std::string first = run();
  CHECK(first == run());
  CHECK_FALSE(first.empty());
}

TEST_CASE("vec/covec module invariants") {
  PrimeCtx f3(3);
  {
    // Bidegree (1,1): bracket functions span the invariants for n >= 1.
    GradedModule M(ModuleSpec::vec_covec(f3, 1, 2, 1, 1, 1, 1));
    InvariantSubspace inv = group_invariants(M);
    CHECK(inv.dim() == 1);
    auto vc = make_vec_covec_ctx(2, 1, 1, f3);
    CHECK(inv.contains(coords_of(M, bracket(1, 1, vc))));
  }
  {
    // Unequal bidegrees have no invariants (centre of G acts nontrivially).
    GradedModule M(ModuleSpec::vec_covec(f3, 1, 2, 1, 3, 2, 1));
    CHECK(group_invariants(M).dim() == 0);
  }
}

TEST_CASE("rref accumulator behaviour") {
  PrimeCtx f5(5);
  RrefAccumulator acc(4, f5);
  CHECK(acc.insert({0, 2, 0, 1}));
  CHECK(acc.insert({0, 0, 3, 1}));
  CHECK_FALSE(acc.insert({0, 4, 3, 3})); // 2*row1 + row2
  CHECK(acc.rank() == 2);
  auto kernel = acc.kernel_basis();
  CHECK(kernel.size() == 2);
  for (const auto& k : kernel) {
    // verify orthogonality to the row space
    for (const auto& row : acc.reduced_rows()) {
      std::uint32_t dot = 0;
      for (std::size_t c = 0; c < 4; ++c) dot += row[c] * k[c];
      CHECK(dot % 5 == 0);
    }
  }
}

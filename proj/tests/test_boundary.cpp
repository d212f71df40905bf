#include "doctest.h"
#include "support.hpp"

using namespace testing;

namespace {

CylinderFunction one(int n) { return CylinderFunction::constant(Alphabet(n), Q(1)); }

}  // namespace

TEST_CASE("solution functions evaluate both parts") {
  auto u = SolutionFunction(CylinderFunction(Alphabet(2), 0, Zs({2, 2})), apply_green(one(2)));
  CHECK(u.value(W(2, "1")) == Q(2));
  CHECK(u.value(W(2, "12")) == Q(7, 4));
  for (int m = 0; m <= 3; ++m) {
    CHECK(apply_H(m, u.restrict(m)) == u.h_values(m));
    LevelIndex idx(Alphabet(2), m);
    for (std::size_t i = 0; i < idx.size(); ++i) CHECK(u.h_value(idx.word(i), m) == u.h_values(m)[i]);
  }
}

TEST_CASE("Laplacian residual tables") {
  std::mt19937_64 rng(20);
  Alphabet a(2);
  auto h = random_cylinder(a, 2, rng);
  ConstantSampler zero(a, Q(0));
  auto est = laplacian_estimate(SolutionFunction::minimizer(h), zero, 2, 5);
  CHECK(est.exact);
  for (const auto& r : est.rows) CHECK(r.residual == Q(0));
  // The sampled route gives the same table.
  auto sampled = laplacian_estimate(CylinderSampler(h), zero, 2, 5);
  CHECK(sampled.exact);

  ConstantSampler c(a, Q(3, 2));
  auto g = SolutionFunction::green(CylinderFunction::constant(a, Q(3, 2)));
  auto est2 = laplacian_estimate(g, c, 0, 6);
  CHECK(est2.exact);
  CHECK(est2.rows.size() == 6);

  CHECK_THROWS_AS(laplacian_estimate(g, c, 2, 2), Error);
}

TEST_CASE("residuals for a series source stay below the oscillation") {
  for (int n : {2, 3}) {
    Alphabet a(n);
    auto s = std::make_shared<CoordinateSeriesSampler>(a, Q(1, n), 0);
    auto u = SolutionFunction::green(s);
    auto est = laplacian_estimate(u, *s, 0, n == 2 ? 7 : 5);
    CHECK(est.non_increasing);
    CHECK_FALSE(est.exact);
    for (const auto& r : est.rows) {
      REQUIRE(r.bound);
      CHECK(r.residual <= *r.bound);
      CHECK(r.residual > 0);
    }
    for (std::size_t i = 1; i < est.rows.size(); ++i)
      CHECK(est.rows[i].residual == est.rows[i - 1].residual * Q(1, n));
  }
}

TEST_CASE("weak residuals") {
  std::mt19937_64 rng(21);
  for (int n : {2, 3}) {
    Alphabet a(n);
    for (int level = 0; level <= 2; ++level) {
      auto f = random_cylinder(a, level, rng);
      auto u = SolutionFunction::green(f);
      CylinderSampler fs(f);
      for (int m = std::max(level, 1); m <= 3; ++m) CHECK(weak_residual(u, fs, 0, m) == Q(0));
    }
  }
  Alphabet b(2);
  ConstantSampler zero(b, Q(0));
  auto h = SolutionFunction::minimizer(random_cylinder(b, 1, rng));
  CHECK(weak_residual(h, zero, 1, 3) == Q(0));
  auto chi = SolutionFunction::minimizer(chi_extension(W(2, "12"), 1));
  CHECK(weak_residual(chi, zero, 0, 1) == Q(1));
  CHECK(weak_residual(chi, zero, 1, 2) == Q(0));
  try {
    weak_residual(chi, zero, 1, 1);
    FAIL("expected level error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::level_too_small);
  }
}

TEST_CASE("weak energy pairing with chi equals minus H") {
  std::mt19937_64 rng(22);
  for (int n : {2, 3}) {
    Alphabet a(n);
    for (int m = 1; m <= 3; ++m) {
      auto u = random_level(a, m, rng);
      auto hu = apply_H(m, u);
      LevelIndex idx(a, m);
      for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx.kappa(i) == 0) continue;
        auto chi = restrict(chi_extension(idx.word(i), m), m);
        CHECK(dirichlet_form(m, u, chi).value == -hu[i]);
      }
    }
  }
}

TEST_CASE("harmonic classification") {
  Alphabet a(2);
  auto h0 = CylinderFunction(a, 0, Zs({3, 5}));
  auto ok = classify_harmonic(restrict(h0, 3), 0);
  CHECK(ok.compatible);
  REQUIRE(ok.witness);
  CHECK(*ok.witness == h0);

  auto bad = classify_harmonic(level_of(2, 1, Zs({0, 1, 0, 0})), 0);
  CHECK_FALSE(bad.compatible);
  REQUIRE(bad.violation);
  CHECK(bad.violation->level == 1);
  CHECK(classify_harmonic(LevelFunction::constant(Alphabet(3), 2, Q(4)), 1).compatible);
  CHECK_THROWS_AS(classify_harmonic(restrict(h0, 1), 1), Error);
}

TEST_CASE("harmonic classification accepts exactly the cylinder-constant functions") {
  std::mt19937_64 rng(23);
  for (int n : {2, 3}) {
    Alphabet a(n);
    for (int M = 0; M <= 1; ++M) {
      for (int t = 0; t < 10; ++t) {
        auto h = random_cylinder(a, M, rng);
        CHECK(classify_harmonic(restrict(h, M + 2), M).compatible);
        auto finer = random_cylinder(a, M + 1, rng);
        auto v = classify_harmonic(restrict(finer, M + 2), M);
        CHECK(v.compatible == (as_cylinder(restrict(finer, M)) == finer));
      }
    }
  }
}

TEST_CASE("Neumann derivatives of solutions") {
  auto chi = SolutionFunction::minimizer(chi_extension(W(2, "12"), 1));
  auto d = neumann_derivative(chi, W(2, "1"), 1, 4);
  CHECK(d.exact);
  CHECK(d.value == Q(-1));
  for (const auto& t : d.sequence) CHECK(t.value == Q(-1));

  auto g = SolutionFunction::green(one(2));
  CHECK(neumann_derivative(g, W(2, "1"), 0, 3).value == Q(1, 2));
  CHECK(neumann_derivative(g, W(2, "12"), 1, 3).value == Q(0));
  // −G_μ 1 has du = +∫_{[1]} 1 dμ; G_μ 1 itself has the opposite sign.
  auto plus = combine(Q(-1), g, Q(0), g);
  CHECK(plus.neumann_value(W(2, "1")) == Q(-1, 2));

  try {
    neumann_derivative(g, W(2, "121"), 1, 3);
    FAIL("expected boundary mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::boundary_mismatch);
  }
}

TEST_CASE("exact Neumann values are the limit of the sequence") {
  std::mt19937_64 rng(24);
  for (int n : {2, 3}) {
    Alphabet a(n);
    auto f = random_cylinder(a, 1, rng);
    auto h = random_cylinder(a, 1, rng);
    SolutionFunction u(h, apply_green(f));
    for (const auto& p : vertex_set(1, a)) {
      auto d = neumann_derivative(u, p, 1, 10);
      // The harmonic part settles at once; the Green part decays like N^-(m+1).
      const Scalar gap = (d.sequence.back().value - d.value).abs();
      Scalar fmax = Q(0);
      for (const auto& v : f.values()) fmax = max(fmax, v.abs());
      CHECK(gap <= fmax * Q(n).pow(-11));
    }
  }
}

TEST_CASE("Neumann derivative is linear") {
  std::mt19937_64 rng(25);
  Alphabet a(3);
  SolutionFunction u(random_cylinder(a, 1, rng), apply_green(random_cylinder(a, 1, rng)));
  SolutionFunction v(random_cylinder(a, 0, rng), apply_green(random_cylinder(a, 2, rng)));
  const Scalar alpha = Q(2, 3), beta = Q(-5);
  auto w = combine(alpha, u, beta, v);
  for (const auto& p : vertex_set(1, a))
    CHECK(w.neumann_value(p) == alpha * u.neumann_value(p) + beta * v.neumann_value(p));
}

TEST_CASE("Neumann derivative of sampled functions carries a tail bound") {
  Alphabet a(2);
  CoordinateSeriesSampler s(a, Q(1, 2), 0);
  auto d = neumann_derivative(s, W(2, "1"), 0, 6);
  CHECK_FALSE(d.exact);
  REQUIRE(d.tail_bound);
  auto longer = neumann_derivative(s, W(2, "1"), 0, 20);
  CHECK((longer.value - d.value).abs() <= *d.tail_bound);

  auto h = chi_extension(W(2, "12"), 1);
  auto dc = neumann_derivative(CylinderSampler(h), W(2, "1"), 0, 3);
  CHECK(dc.exact);
  CHECK(dc.value == Q(-1));

  FunctionSampler opaque(a, Arith::exact, [](const VertexWord&) { return Q(0); });
  CHECK_FALSE(neumann_derivative(opaque, W(2, "1"), 0, 3).tail_bound);
}

TEST_CASE("Gauss-Green examples") {
  Alphabet a(2);
  auto u = SolutionFunction::minimizer(chi_extension(W(2, "12"), 1));
  auto v = SolutionFunction::minimizer(chi_extension(W(2, "21"), 1));
  auto r = gauss_green_check(u, v, 1);
  CHECK(r.lhs == Q(0));
  CHECK(r.rhs == Q(0));
  CHECK(r.residual == Q(0));
  std::vector<Scalar> du, dv;
  for (const auto& p : vertex_set(1, a)) {
    du.push_back(u.neumann_value(p));
    dv.push_back(v.neumann_value(p));
  }
  CHECK(du == Zs({-1, 1, 0, 0}));
  CHECK(dv == Zs({0, 0, 1, -1}));

  auto f1 = CylinderFunction(a, 1, Zs({1, 3, 0, 2}));
  auto g = SolutionFunction::green(f1);
  auto c = SolutionFunction::minimizer(one(2));
  auto r2 = gauss_green_check(g, c, 0);
  CHECK(r2.residual == Q(0));
  CHECK(r2.conservation_u == Q(0));
  CHECK(r2.rhs == f1.integral());
  REQUIRE(r2.energy_identity);
  CHECK(*r2.energy_identity == Q(0));

  CHECK(gauss_green_check(g, g, 0).residual == Q(0));
  try {
    gauss_green_check(u, v, 0);
    FAIL("expected boundary mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::boundary_mismatch);
  }
}

TEST_CASE("Gauss-Green with mixed solutions") {
  std::mt19937_64 rng(26);
  for (int n : {2, 3}) {
    Alphabet a(n);
    for (int M = 0; M <= 2; ++M) {
      SolutionFunction u(random_cylinder(a, M, rng), apply_green(random_cylinder(a, 1, rng)));
      SolutionFunction v(random_cylinder(a, std::min(M, 1), rng), apply_green(random_cylinder(a, 2, rng)));
      auto r = gauss_green_check(u, v, M);
      CHECK(r.residual == Q(0));
      CHECK(r.conservation_u == Q(0));
      CHECK(r.conservation_v == Q(0));
      auto h = SolutionFunction::minimizer(random_cylinder(a, M, rng));
      auto r2 = gauss_green_check(u, h, M);
      REQUIRE(r2.energy_identity);
      CHECK(*r2.energy_identity == Q(0));
    }
  }
}

TEST_CASE("Dirichlet problem") {
  Alphabet a(2);
  auto s0 = solve_dirichlet(CylinderFunction::constant(a, Q(0)), Zs({3, 5}));
  CHECK(s0.boundary_defect == Q(0));
  CHECK(s0.u.value(W(2, "1")) == Q(3));
  CHECK(s0.u.value(W(2, "2122")) == Q(5));
  CHECK(s0.estimate.exact);

  auto s1 = solve_dirichlet(one(2), Zs({0, 0}));
  CHECK(s1.u.value(W(2, "12")) == Q(-1, 4));
  CHECK(s1.estimate.exact);

  auto s2 = solve_dirichlet(one(2), Zs({2, 2}));
  CHECK(s2.u.value(W(2, "1")) == Q(2));
  CHECK(s2.u.value(W(2, "2")) == Q(2));
  CHECK(s2.u.value(W(2, "12")) == Q(7, 4));

  try {
    solve_dirichlet(one(2), Zs({1, 2, 3}));
    FAIL("expected arity error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::arity);
  }
}

TEST_CASE("Dirichlet solutions are unique up to boundary-vanishing harmonics") {
  std::mt19937_64 rng(27);
  for (int n : {2, 3}) {
    Alphabet a(n);
    auto f = random_cylinder(a, 2, rng);
    std::vector<Scalar> zeta;
    for (int l = 0; l < n; ++l) zeta.push_back(random_rational(rng));
    auto s = solve_dirichlet(f, zeta);
    auto t = solve_dirichlet(f, zeta);
    CHECK(s.u.restrict(3) == t.u.restrict(3));
    // Any other solution differs by a harmonic function vanishing on V₀,
    // and harmonic functions with boundary V₀ are constant on [l].
    auto diff = s.u.restrict(3) - t.u.restrict(3);
    auto verdict = classify_harmonic(diff, 0);
    CHECK(verdict.compatible);
    CHECK(*verdict.witness == CylinderFunction::constant(a, Q(0)));
    // A perturbation that vanishes on V₀ but is not harmonic shows up in the table.
    auto bump = SolutionFunction::minimizer(chi_extension(VertexWord::parse(a, "12"), 1));
    auto perturbed = combine(Q(1), s.u, Q(1), bump);
    CHECK_FALSE(laplacian_estimate(perturbed, CylinderSampler(f), 0, 3).exact);
  }
}

TEST_CASE("Neumann problem") {
  Alphabet a(2);
  auto s = solve_neumann(one(2), Qs({{1, 2}, {1, 2}}));
  CHECK(s.derivatives == Qs({{1, 2}, {1, 2}}));
  CHECK(s.u.value(W(2, "12")) == Q(-1, 4));
  CHECK(s.estimate.exact);

  auto z = solve_neumann(CylinderFunction::constant(a, Q(0)), Zs({0, 0}));
  for (const auto& p : vertex_set(2, a)) CHECK(z.u.value(p) == Q(0));

  try {
    solve_neumann(one(2), Qs({{1, 2}, {1, 3}}));
    FAIL("expected incompatible");
  } catch (const IncompatibleError& e) {
    CHECK(e.code() == ErrorCode::incompatible);
    CHECK(e.defect() == Qs({{0, 1}, {-1, 6}}));
  }
  CHECK_THROWS_AS(solve_neumann(one(2), Zs({1})), Error);
}

#include "shiftlap/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "shiftlap/boundary.hpp"

namespace shiftlap {

namespace {

// Levels above this are skipped so the suite stays at desk scale.
constexpr std::size_t kVerifyPointBudget = 1U << 12;

class Checker {
 public:
  explicit Checker(const VerifyConfig& c) : cfg_(c), alphabet_(c.n), rng_(c.seed) {}

  const Alphabet& alphabet() const { return alphabet_; }
  const VerifyConfig& config() const { return cfg_; }

  int top_level(int cap) const {
    int m = 0;
    while (m + 1 <= std::min(cfg_.m_max, cap) && alphabet_.vertex_count(m + 1) <= kVerifyPointBudget)
      ++m;
    return m;
  }

  Scalar random_value() {
    std::uniform_int_distribution<long> num(-9, 9);
    std::uniform_int_distribution<long> den(1, 6);
    return Scalar::ratio(num(rng_), den(rng_), cfg_.arith);
  }

  LevelFunction random_level(int m) {
    std::vector<Scalar> v;
    for (std::size_t i = 0; i < alphabet_.vertex_count(m); ++i) v.push_back(random_value());
    return LevelFunction(alphabet_, m, std::move(v));
  }

  CylinderFunction random_cylinder(int level) {
    std::vector<Scalar> v;
    for (std::size_t i = 0; i < alphabet_.vertex_count(level); ++i) v.push_back(random_value());
    return CylinderFunction(alphabet_, level, std::move(v));
  }

  bool close(const Scalar& a, const Scalar& b) const {
    if (a.is_exact()) return a == b;
    const double x = a.to_double(), y = b.to_double();
    return std::abs(x - y) <= 1e-9 * (1.0 + std::max(std::abs(x), std::abs(y)));
  }
  bool small(const Scalar& a) const { return close(a, a.like(0)); }

  /// Runs `body` once per case; body returns an empty string on success.
  void check(const std::string& name, const std::function<void(CheckResult&)>& body) {
    CheckResult r{name, true, 0, {}};
    try {
      body(r);
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    report_.checks.push_back(std::move(r));
  }

  static void expect(CheckResult& r, bool ok, const std::string& what) {
    ++r.cases;
    if (!ok && r.passed) {
      r.passed = false;
      r.detail = what;
    }
  }

  VerifyReport take() { return std::move(report_); }

 private:
  VerifyConfig cfg_;
  Alphabet alphabet_;
  std::mt19937_64 rng_;
  VerifyReport report_;
};

}  // namespace

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

VerifyReport run_verification(const VerifyConfig& config) {
  if (config.m_max < 1) throw Error(ErrorCode::level_too_small, "verify needs mmax >= 1");
  Checker ck(config);
  const Alphabet& a = ck.alphabet();
  const int top = ck.top_level(6);
  const int samples = std::max(config.samples, 1);
  auto at = [](int m) { return " at m=" + std::to_string(m); };

  ck.check("dirichlet-forms-agree", [&](CheckResult& r) {
    for (int m = 0; m <= top; ++m)
      for (int t = 0; t < samples; ++t) {
        auto u = ck.random_level(m), v = ck.random_level(m);
        Checker::expect(r, ck.close(dirichlet_form(m, u, v).value,
                                    dirichlet_form(m, u, v, FormAlgorithm::difference_form).value),
                        "operator and difference forms differ" + at(m));
      }
  });

  ck.check("dirichlet-form-symmetric-nonnegative", [&](CheckResult& r) {
    for (int m = 0; m <= top; ++m)
      for (int t = 0; t < samples; ++t) {
        auto u = ck.random_level(m), v = ck.random_level(m);
        Checker::expect(r, ck.close(dirichlet_form(m, u, v).value, dirichlet_form(m, v, u).value),
                        "asymmetric form" + at(m));
        Checker::expect(r, dirichlet_energy(u) >= 0 || ck.small(dirichlet_energy(u)),
                        "negative energy" + at(m));
        auto c = LevelFunction::constant(a, m, ck.random_value());
        Checker::expect(r, ck.small(dirichlet_energy(c)), "constant with energy" + at(m));
      }
  });

  ck.check("markov-property", [&](CheckResult& r) {
    for (int m = 0; m <= top; ++m)
      for (int t = 0; t < samples; ++t) {
        auto u = ck.random_level(m);
        const Scalar e = dirichlet_energy(u), ec = dirichlet_energy(clamp(u));
        Checker::expect(r, ec <= e || ck.close(ec, e), "clamp raised the energy" + at(m));
      }
  });

  ck.check("H-symmetric-zero-row-sums", [&](CheckResult& r) {
    for (int m = 0; m <= top; ++m) {
      auto ones = apply_H(m, LevelFunction::constant(a, m, Scalar::one(config.arith)));
      for (const auto& v : ones.values()) Checker::expect(r, ck.small(v), "nonzero row sum" + at(m));
      auto u = ck.random_level(m), v = ck.random_level(m);
      auto hu = apply_H(m, u), hv = apply_H(m, v);
      Scalar l = Scalar::zero(config.arith), rr = l;
      for (std::size_t i = 0; i < u.size(); ++i) {
        l += u[i] * hv[i];
        rr += hu[i] * v[i];
      }
      Checker::expect(r, ck.close(l, rr), "H not symmetric" + at(m));
    }
  });

  ck.check("minimizer-extension", [&](CheckResult& r) {
    for (int m = 0; m < top; ++m)
      for (int t = 0; t < samples; ++t) {
        auto ext = minimizer_extension(ck.random_level(m), m + 1, 2, config.seed + static_cast<unsigned>(t));
        Checker::expect(r, ext.certificate.first_order, "extension not stationary" + at(m));
        Checker::expect(r, config.arith == Arith::float64 || ext.certificate.ok(),
                        "minimality certificate failed" + at(m));
      }
  });

  ck.check("weak-pairing-with-chi", [&](CheckResult& r) {
    for (int m = 1; m <= std::min(top, 4); ++m) {
      auto u = ck.random_level(m);
      auto hu = apply_H(m, u);
      LevelIndex idx(a, m);
      for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx.kappa(i) == 0) continue;
        auto chi = restrict(chi_extension(idx.word(i), m, config.arith), m);
        Checker::expect(r, ck.close(dirichlet_form(m, u, chi).value, -hu[i]),
                        "E(u, chi) != -H u at " + idx.word(i).str());
      }
    }
  });

  ck.check("green-kernel-symmetric", [&](CheckResult& r) {
    const auto pts = vertex_set(std::min(top, 3), a);
    for (const auto& x : pts)
      for (const auto& y : pts)
        if (!(x == y))
          Checker::expect(r, green_kernel(x, y, config.arith) == green_kernel(y, x, config.arith),
                          "g(x,y) != g(y,x) for " + x.str() + ", " + y.str());
  });

  ck.check("green-operator-identities", [&](CheckResult& r) {
    for (int t = 0; t < samples; ++t) {
      const int level = t % 3;
      if (a.vertex_count(level) > kVerifyPointBudget) continue;
      auto g = apply_green(ck.random_cylinder(level));
      for (int l = 0; l < a.size(); ++l)
        Checker::expect(r, ck.small(g.value(VertexWord::fixed_point(a, static_cast<Symbol>(l)))),
                        "G f nonzero on a fixed point");
      for (int m = 0; m <= std::min(top, 4); ++m) {
        auto direct = apply_H(m, g.restrict(m));
        auto fast = g.h_values(m);
        for (std::size_t i = 0; i < direct.size(); ++i)
          Checker::expect(r, ck.close(direct[i], fast[i]), "H(G f) mismatch" + at(m));
      }
      for (const auto& x : vertex_set(std::min(top, 2), a))
        Checker::expect(r, ck.close(g.value(x), g.value_at_resolution(x, std::max(kappa(x), level) + 1)),
                        "refinement changed G f at " + x.str());
    }
  });

  ck.check("strong-laplacian", [&](CheckResult& r) {
    for (int t = 0; t < samples; ++t) {
      const int level = t % 3;
      if (level >= top) continue;
      auto f = ck.random_cylinder(level);
      auto est = laplacian_estimate(SolutionFunction::green(f), CylinderSampler(f), 0, top);
      for (const auto& row : est.rows)
        if (row.m >= level)
          Checker::expect(r, ck.small(row.residual), "nonzero residual" + at(row.m));
      Checker::expect(r, ck.small(weak_residual(SolutionFunction::green(f), CylinderSampler(f), 0,
                                                std::max(level, 1))),
                      "nonzero weak residual");
    }
  });

  ck.check("neumann-derivative-of-green", [&](CheckResult& r) {
    for (int t = 0; t < samples; ++t) {
      auto f = ck.random_cylinder(t % 2);
      auto g = apply_green(f);
      for (int M = 0; M <= std::min(top, 2); ++M)
        for (const auto& p : vertex_set(M, a)) {
          const Scalar want = kappa(p) == 0
                                  ? -f.integral(CylinderSet(a, {p.at(1)}))
                                  : Scalar::zero(config.arith);
          Checker::expect(r, ck.close(g.neumann_limit(p), want), "d(G f) wrong at " + p.str());
        }
    }
  });

  ck.check("gauss-green", [&](CheckResult& r) {
    for (int M = 0; M <= std::min(top, 2); ++M)
      for (int t = 0; t < samples; ++t) {
        SolutionFunction u(ck.random_cylinder(M), apply_green(ck.random_cylinder(t % 2)));
        auto h = SolutionFunction::minimizer(ck.random_cylinder(std::min(M, t % 3)));
        auto rep = gauss_green_check(u, h, M);
        Checker::expect(r, ck.small(rep.residual), "Gauss-Green residual" + at(M));
        Checker::expect(r, ck.small(rep.conservation_u), "conservation failed" + at(M));
        Checker::expect(r, rep.energy_identity && ck.small(*rep.energy_identity),
                        "energy identity failed" + at(M));
      }
  });

  ck.check("harmonic-classification", [&](CheckResult& r) {
    for (int M = 0; M + 1 <= std::min(top, 3); ++M)
      for (int t = 0; t < samples; ++t) {
        auto h = ck.random_cylinder(M);
        Checker::expect(r, classify_harmonic(restrict(h, M + 1), M).compatible,
                        "rejected a cylinder function" + at(M));
        auto finer = ck.random_cylinder(M + 1);
        const bool constant = as_cylinder(restrict(finer, M)) == finer;
        Checker::expect(r, classify_harmonic(restrict(finer, M + 1), M).compatible == constant,
                        "misclassified a level-" + std::to_string(M + 1) + " function");
      }
  });

  ck.check("boundary-value-problems", [&](CheckResult& r) {
    for (int t = 0; t < samples; ++t) {
      auto f = ck.random_cylinder(t % 2);
      std::vector<Scalar> zeta;
      for (int l = 0; l < a.size(); ++l) zeta.push_back(ck.random_value());
      auto d = solve_dirichlet(f, zeta, std::max(top, 1));
      Checker::expect(r, ck.small(d.boundary_defect), "Dirichlet data not attained");
      std::vector<Scalar> xi;
      for (int l = 0; l < a.size(); ++l) xi.push_back(f.integral(CylinderSet(a, {static_cast<Symbol>(l)})));
      auto n = solve_neumann(f, xi, std::max(top, 1));
      for (std::size_t l = 0; l < xi.size(); ++l)
        Checker::expect(r, ck.close(n.derivatives[l], xi[l]), "Neumann data not attained");
      xi[0] += Scalar::one(config.arith);
      bool rejected = false;
      try {
        solve_neumann(f, xi, 1);
      } catch (const IncompatibleError&) {
        rejected = true;
      }
      Checker::expect(r, rejected, "incompatible Neumann data accepted");
    }
  });

  return ck.take();
}

}  // namespace shiftlap

#include "shiftlap/boundary.hpp"

#include <algorithm>
#include <cmath>

namespace shiftlap {

namespace {

CylinderFunction zero_cylinder(const Alphabet& alphabet, Arith arith) {
  return CylinderFunction::constant(alphabet, Scalar::zero(arith));
}

void require_levels(int M, int m_max) {
  if (M < 0) throw Error(ErrorCode::level_too_small, "boundary index M must be >= 0");
  if (m_max < M + 1)
    throw Error(ErrorCode::level_too_small, "residual levels start at M+1 = " +
                                                std::to_string(M + 1) + ", got m_max " +
                                                std::to_string(m_max));
}

// Fills the rows of a residual table from per-level H_m values.
template <class HValues>
LaplacianEstimate residual_table(const Alphabet& alphabet, const Sampler& f, int M, int m_max,
                                 HValues&& h_values) {
  require_same_alphabet(alphabet, f.alphabet());
  require_levels(M, m_max);
  LaplacianEstimate est;
  est.M = M;
  est.exact = true;
  for (int m = M + 1; m <= m_max; ++m) {
    LevelIndex idx(alphabet, m);
    const LevelFunction h = h_values(m);
    const Scalar scale = Scalar(static_cast<long>(alphabet.size()), f.arith()).pow(m + 1);
    Scalar worst = Scalar::zero(f.arith());
    std::string worst_point;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (idx.kappa(i) <= M) continue;
      const VertexWord p = idx.word(i);
      Scalar r = (scale * h[i] - f.value(p)).abs();
      if (worst_point.empty() || worst < r) {
        worst = std::move(r);
        worst_point = p.str();
      }
    }
    if (!worst.is_zero()) est.exact = false;
    if (!est.rows.empty() && est.rows.back().residual < worst) est.non_increasing = false;
    est.rows.push_back({m, std::move(worst), std::move(worst_point), f.oscillation(m)});
  }
  return est;
}

// The source of a Green part as a cylinder function, for exact pairings.
CylinderFunction resolved_source(const GreenApplication& g) {
  const auto level = g.source().resolution();
  if (!level)
    throw Error(ErrorCode::domain, "Gauss-Green needs cylinder-resolved sources");
  if (const auto* cyl = dynamic_cast<const CylinderSampler*>(&g.source())) return cyl->function();
  return project(g.source(), *level);
}

// ∫ f · w dμ for a cylinder f and a solution w = h - G_μ g.
Scalar pair_with(const CylinderFunction& f, const SolutionFunction& w) {
  Scalar total = product(f, w.harmonic()).integral();
  if (w.green_part()) total -= green_pairing(resolved_source(*w.green_part()), f);
  return total;
}

// E(u, v) when v is a pure minimizer of level k: only V_k carries H_m v.
Scalar energy_against_minimizer(const SolutionFunction& u, const CylinderFunction& v) {
  const int k = v.level();
  LevelIndex idx(v.alphabet(), k);
  const LevelFunction hv = apply_H(k, restrict(v, k));
  Scalar sum = Scalar::zero(v.arith());
  for (std::size_t i = 0; i < idx.size(); ++i)
    if (!hv[i].is_zero()) sum -= u.value(idx.word(i)) * hv[i];
  return sum;
}

std::vector<Scalar> check_arity(const Alphabet& alphabet, const std::vector<Scalar>& data,
                                const char* name) {
  if (static_cast<int>(data.size()) != alphabet.size())
    throw Error(ErrorCode::arity, std::string(name) + " needs " + std::to_string(alphabet.size()) +
                                      " values, got " + std::to_string(data.size()));
  return data;
}

bool matches(const Scalar& a, const Scalar& b) {
  if (a.is_exact()) return a == b;
  const double x = a.to_double();
  const double y = b.to_double();
  return std::abs(x - y) <= 1e-12 * (1.0 + std::max(std::abs(x), std::abs(y)));
}

}  // namespace

SolutionFunction::SolutionFunction(CylinderFunction harmonic, std::optional<GreenApplication> green)
    : harmonic_(std::move(harmonic)), green_(std::move(green)) {
  if (green_) {
    require_same_alphabet(harmonic_.alphabet(), green_->alphabet());
    if (green_->arith() != harmonic_.arith())
      throw Error(ErrorCode::mode_mismatch, "harmonic and Green parts use different arithmetic");
  }
}

SolutionFunction SolutionFunction::minimizer(CylinderFunction h) {
  return SolutionFunction(std::move(h), std::nullopt);
}

SolutionFunction SolutionFunction::green(SamplerPtr f) {
  GreenApplication g(std::move(f));
  auto h = zero_cylinder(g.alphabet(), g.arith());
  return SolutionFunction(std::move(h), std::move(g));
}

SolutionFunction SolutionFunction::green(const CylinderFunction& f) {
  return green(make_sampler(f));
}

Scalar SolutionFunction::value(const VertexWord& x) const {
  Scalar v = evaluate(harmonic_, x);
  if (green_) v -= green_->value(x);
  return v;
}

LevelFunction SolutionFunction::restrict(int m) const {
  LevelFunction out = shiftlap::restrict(harmonic_, m);
  if (green_) out = out - green_->restrict(m);
  return out;
}

LevelFunction SolutionFunction::h_values(int m) const {
  LevelFunction out = apply_H(m, shiftlap::restrict(harmonic_, m));
  if (green_) out = out - green_->h_values(m);
  return out;
}

Scalar SolutionFunction::h_value(const VertexWord& p, int m) const {
  Scalar v = apply_H_at(m, p, [this](const VertexWord& q) { return evaluate(harmonic_, q); });
  if (green_) v -= green_->h_value(p, m);
  return v;
}

Scalar SolutionFunction::neumann_value(const VertexWord& p) const {
  const int m = std::max(harmonic_.level(), kappa(p));
  Scalar v = -apply_H_at(m, p, [this](const VertexWord& q) { return evaluate(harmonic_, q); });
  if (green_) v -= green_->neumann_limit(p);
  return v;
}

SolutionFunction combine(const Scalar& alpha, const SolutionFunction& u, const Scalar& beta,
                         const SolutionFunction& v) {
  require_same_alphabet(u.alphabet(), v.alphabet());
  CylinderFunction h = alpha * u.harmonic() + beta * v.harmonic();
  if (!u.green_ && !v.green_) return SolutionFunction::minimizer(std::move(h));
  auto zero = std::make_shared<ConstantSampler>(u.alphabet(), Scalar::zero(u.arith()));
  SamplerPtr f = u.green_ ? u.green_->source_ptr() : zero;
  SamplerPtr g = v.green_ ? v.green_->source_ptr() : zero;
  return SolutionFunction(std::move(h), GreenApplication(linear_combination(alpha, f, beta, g)));
}

LaplacianEstimate laplacian_estimate(const SolutionFunction& u, const Sampler& f, int M,
                                     int m_max) {
  return residual_table(u.alphabet(), f, M, m_max, [&](int m) { return u.h_values(m); });
}

LaplacianEstimate laplacian_estimate(const Sampler& u, const Sampler& f, int M, int m_max) {
  return residual_table(u.alphabet(), f, M, m_max,
                        [&](int m) { return apply_H(m, restrict(u, m)); });
}

Scalar weak_residual(const SolutionFunction& u, const Sampler& f, int M, int m) {
  require_same_alphabet(u.alphabet(), f.alphabet());
  if (M < 0 || m < M + 1)
    throw Error(ErrorCode::level_too_small, "test level must be >= M+1 = " + std::to_string(M + 1));
  LevelIndex idx(u.alphabet(), m);
  const LevelFunction h = u.h_values(m);
  Scalar worst = Scalar::zero(u.arith());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx.kappa(i) <= M) continue;
    const auto w = idx.word(i);
    const CylinderSet cyl(u.alphabet(), {w.written().begin(), w.written().end()});
    auto integral = f.integral(cyl);
    if (!integral)
      throw Error(ErrorCode::not_integrable, "weak residual needs exact cylinder integrals of f");
    worst = max(worst, (*integral - h[i]).abs());
  }
  return worst;
}

HarmonicVerdict classify_harmonic(const LevelFunction& u, int M) {
  const int m = u.level();
  if (M < 0 || m <= M)
    throw Error(ErrorCode::level_order, "classification needs m > M, got m = " +
                                            std::to_string(m) + ", M = " + std::to_string(M));
  LevelIndex idx(u.alphabet(), m);
  const int n = idx.n();
  HarmonicVerdict verdict;
  for (int j = M + 1; j <= m && !verdict.violation; ++j) {
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (idx.kappa(i) != j) continue;
      const Symbol own = idx.symbol(i, j + 1);
      Scalar r = u[i].like(0);
      for (int l = 0; l < n; ++l)
        if (l != own) r += u[idx.neighbor(i, j, static_cast<Symbol>(l))] - u[i];
      if (!r.is_zero()) {
        verdict.violation = HarmonicViolation{j, idx.word(i).str(), std::move(r)};
        break;
      }
    }
  }
  if (verdict.violation) return verdict;

  LevelIndex coarse(u.alphabet(), M);
  std::vector<Scalar> values;
  values.reserve(coarse.size());
  for (std::size_t c = 0; c < coarse.size(); ++c) values.push_back(u[idx.embed_from(c, M)]);
  CylinderFunction witness(u.alphabet(), M, std::move(values));
  if (!(restrict(witness, m) == u))
    throw Error(ErrorCode::domain, "balance equations hold but the cylinder witness disagrees");
  verdict.compatible = true;
  verdict.witness = std::move(witness);
  return verdict;
}

NeumannDerivative neumann_derivative(const SolutionFunction& u, const VertexWord& p, int M,
                                     int m_max) {
  require_same_alphabet(u.alphabet(), p.alphabet());
  if (kappa(p) > M)
    throw Error(ErrorCode::boundary_mismatch, "point " + p.str() + " is not in V_" + std::to_string(M));
  NeumannDerivative out{p.canonical().str(), M, {}, Scalar::zero(u.arith()), true, std::nullopt};
  for (int m = M; m <= std::max(m_max, M); ++m) out.sequence.push_back({m, -u.h_value(p, m)});
  out.value = u.neumann_value(p);
  out.tail_bound = out.value.like(0);
  return out;
}

NeumannDerivative neumann_derivative(const Sampler& u, const VertexWord& p, int M, int m_max) {
  require_same_alphabet(u.alphabet(), p.alphabet());
  if (kappa(p) > M)
    throw Error(ErrorCode::boundary_mismatch, "point " + p.str() + " is not in V_" + std::to_string(M));
  const int top = std::max(m_max, M);
  NeumannDerivative out{p.canonical().str(), M, {}, Scalar::zero(u.arith()), false, std::nullopt};
  auto eval = [&u](const VertexWord& q) { return u.value(q); };
  for (int m = M; m <= top; ++m) out.sequence.push_back({m, -apply_H_at(m, p, eval)});
  out.value = out.sequence.back().value;
  if (auto res = u.resolution(); res && top >= *res) {
    out.exact = true;
    out.tail_bound = out.value.like(0);
  } else if (auto mod = u.modulus(); mod && mod->ratio < 1) {
    const long n = u.alphabet().size();
    out.tail_bound = mod->constant * (n - 1) * mod->ratio.pow(top + 2) / (mod->ratio.like(1) - mod->ratio);
  }
  return out;
}

GaussGreenReport gauss_green_check(const SolutionFunction& u, const SolutionFunction& v, int M) {
  require_same_alphabet(u.alphabet(), v.alphabet());
  if (M < 0) throw Error(ErrorCode::level_too_small, "boundary index M must be >= 0");
  for (const auto* w : {&u, &v})
    if (w->boundary_level() > M)
      throw Error(ErrorCode::boundary_mismatch,
                  "harmonic part of level " + std::to_string(w->boundary_level()) +
                      " is not in D_" + std::to_string(M));

  const Arith arith = u.arith();
  auto laplacian = [&](const SolutionFunction& w) {
    return w.green_part() ? resolved_source(*w.green_part()) : zero_cylinder(w.alphabet(), arith);
  };
  const CylinderFunction lu = laplacian(u);
  const CylinderFunction lv = laplacian(v);

  GaussGreenReport r;
  r.lhs = pair_with(lu, v) - pair_with(lv, u);

  Scalar rhs = Scalar::zero(arith);
  Scalar sum_du = Scalar::zero(arith);
  Scalar sum_dv = Scalar::zero(arith);
  Scalar boundary_v_du = Scalar::zero(arith);
  for (const auto& p : vertex_set(M, u.alphabet())) {
    const Scalar du = u.neumann_value(p);
    const Scalar dv = v.neumann_value(p);
    const Scalar vp = v.value(p);
    rhs += vp * du - u.value(p) * dv;
    boundary_v_du += vp * du;
    sum_du += du;
    sum_dv += dv;
  }
  r.rhs = rhs;
  r.residual = (r.lhs - r.rhs).abs();
  r.conservation_u = (sum_du - lu.integral()).abs();
  r.conservation_v = (sum_dv - lv.integral()).abs();

  std::optional<Scalar> energy;
  if (!v.green_part())
    energy = energy_against_minimizer(u, v.harmonic());
  else if (!u.green_part())
    energy = energy_against_minimizer(v, u.harmonic());
  if (energy) r.energy_identity = (*energy - boundary_v_du + pair_with(lu, v)).abs();
  return r;
}

DirichletSolution solve_dirichlet(SamplerPtr f, const std::vector<Scalar>& zeta, int check_level) {
  if (!f) throw Error(ErrorCode::domain, "null source function");
  const Alphabet& alphabet = f->alphabet();
  CylinderFunction h(alphabet, 0, check_arity(alphabet, zeta, "zeta"));
  const Sampler& source = *f;
  SolutionFunction u(std::move(h), GreenApplication(std::move(f)));

  Scalar defect = Scalar::zero(u.arith());
  for (int l = 0; l < alphabet.size(); ++l) {
    const auto p = VertexWord::fixed_point(alphabet, static_cast<Symbol>(l));
    defect = max(defect, (u.value(p) - zeta[static_cast<std::size_t>(l)]).abs());
  }
  LaplacianEstimate est = laplacian_estimate(u, source, 0, std::max(check_level, 1));
  return {std::move(u), std::move(defect), std::move(est)};
}

DirichletSolution solve_dirichlet(const CylinderFunction& f, const std::vector<Scalar>& zeta,
                                  int check_level) {
  return solve_dirichlet(make_sampler(f), zeta, check_level);
}

NeumannSolution solve_neumann(SamplerPtr f, const std::vector<Scalar>& xi, int check_level) {
  if (!f) throw Error(ErrorCode::domain, "null source function");
  const Alphabet alphabet = f->alphabet();
  check_arity(alphabet, xi, "xi");
  const Sampler& source = *f;
  GreenApplication g(f);

  std::vector<Scalar> defect;
  bool compatible = true;
  for (int l = 0; l < alphabet.size(); ++l) {
    const Scalar mass = g.integral(CylinderSet(alphabet, {static_cast<Symbol>(l)}));
    const Scalar& x = xi[static_cast<std::size_t>(l)];
    if (!matches(x, mass)) compatible = false;
    defect.push_back(x - mass);
  }
  if (!compatible)
    throw IncompatibleError("Neumann data must equal the source mass of each first-level cylinder",
                            std::move(defect));

  SolutionFunction u = SolutionFunction::green(std::move(f));
  std::vector<Scalar> derivatives;
  for (int l = 0; l < alphabet.size(); ++l)
    derivatives.push_back(u.neumann_value(VertexWord::fixed_point(alphabet, static_cast<Symbol>(l))));
  LaplacianEstimate est = laplacian_estimate(u, source, 0, std::max(check_level, 1));
  return {std::move(u), std::move(derivatives), std::move(est)};
}

NeumannSolution solve_neumann(const CylinderFunction& f, const std::vector<Scalar>& xi,
                              int check_level) {
  return solve_neumann(make_sampler(f), xi, check_level);
}

}  // namespace shiftlap

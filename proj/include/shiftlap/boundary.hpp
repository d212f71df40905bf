#pragma once

// Boundary-value calculus with V_M as the boundary: strong and weak Laplacian
// diagnostics, harmonic classification, Neumann derivatives, Gauss-Green and
// the Dirichlet/Neumann solvers.
//
// Sign conventions: du(p) = lim -H_m u(p), Δ(G_μ f) = -f, and solutions are
// u = h - G_μ f.

#include <optional>
#include <string>
#include <vector>

#include "shiftlap/error.hpp"
#include "shiftlap/forms.hpp"
#include "shiftlap/green.hpp"

namespace shiftlap {

/// u = h - G_μ f with h an energy minimizer and f an integrable source.
/// Either part may be absent (h ≡ 0, f ≡ 0).
class SolutionFunction {
 public:
  SolutionFunction(CylinderFunction harmonic, std::optional<GreenApplication> green);

  static SolutionFunction minimizer(CylinderFunction h);
  /// u = -G_μ f.
  static SolutionFunction green(SamplerPtr f);
  static SolutionFunction green(const CylinderFunction& f);

  const Alphabet& alphabet() const noexcept { return harmonic_.alphabet(); }
  Arith arith() const noexcept { return harmonic_.arith(); }
  const CylinderFunction& harmonic() const noexcept { return harmonic_; }
  const std::optional<GreenApplication>& green_part() const noexcept { return green_; }

  /// Δu: the source f, or nothing when u is a pure minimizer (Δu = 0).
  const Sampler* laplacian() const noexcept { return green_ ? &green_->source() : nullptr; }

  /// Smallest M with u ∈ D_M: the level of the harmonic part.
  int boundary_level() const noexcept { return harmonic_.level(); }

  Scalar value(const VertexWord& x) const;
  LevelFunction restrict(int m) const;

  /// H_m u on V_m, exact.
  LevelFunction h_values(int m) const;
  Scalar h_value(const VertexWord& p, int m) const;

  /// du(p) exactly; the minimizer part contributes -H_m h(p) for any
  /// m ≥ max(level, κ_p), beyond which increments vanish.
  Scalar neumann_value(const VertexWord& p) const;

  /// α·u + β·v.
  friend SolutionFunction combine(const Scalar& alpha, const SolutionFunction& u,
                                  const Scalar& beta, const SolutionFunction& v);

 private:
  CylinderFunction harmonic_;
  std::optional<GreenApplication> green_;
};

struct LaplacianEstimate {
  struct Row {
    int m;
    /// max over V_m \ V_M of |N^(m+1) H_m u(p) - f(p)|.
    Scalar residual;
    std::string worst_point;
    /// sup-oscillation ε_m of the source when one is known.
    std::optional<Scalar> bound;
  };
  int M;
  std::vector<Row> rows;
  /// Residuals never increase across the table.
  bool non_increasing = true;
  /// Every residual is exactly zero.
  bool exact = false;
};

/// Residual table for m = M+1..m_max using exact H_m values.
LaplacianEstimate laplacian_estimate(const SolutionFunction& u, const Sampler& f, int M, int m_max);
/// Same table for an arbitrary sampled u (H_m from point values).
LaplacianEstimate laplacian_estimate(const Sampler& u, const Sampler& f, int M, int m_max);

/// max over q ∈ V_m \ V_M of |E(u, χ_q^m) + ∫ f χ_q^m dμ| with
/// E(u, χ_q^m) = -H_m u(q). LevelTooSmall if m < M+1.
Scalar weak_residual(const SolutionFunction& u, const Sampler& f, int M, int m);

struct HarmonicViolation {
  int level;
  std::string point;
  /// Σ_{q ∈ U_{x,j}} (h(q) - h(x)), which must vanish.
  Scalar residual;
};

struct HarmonicVerdict {
  bool compatible = false;
  /// Level-M cylinder function reproducing u when compatible.
  std::optional<CylinderFunction> witness;
  std::optional<HarmonicViolation> violation;
};

/// Checks the balance equations Σ_{q∈U_{x,j}} (u(q) - u(x)) = 0 for every
/// x ∈ V_j \ V_{j-1}, M < j ≤ m. They hold iff u is constant on every
/// cylinder of length M+1. LevelOrderError if m ≤ M.
HarmonicVerdict classify_harmonic(const LevelFunction& u, int M);

struct NeumannDerivative {
  std::string point;
  int M;
  struct Term {
    int m;
    Scalar value;  // -H_m u(p)
  };
  std::vector<Term> sequence;
  Scalar value;
  bool exact = false;
  /// Bound on |value - lim| (zero distance once exact). Missing when a
  /// sampled u declares no modulus.
  std::optional<Scalar> tail_bound;
};

/// du(p) for p ∈ V_M. BoundaryMismatch if κ_p > M.
NeumannDerivative neumann_derivative(const SolutionFunction& u, const VertexWord& p, int M,
                                     int m_max);
/// Sequence -H_m u(p) for a sampled u, with the geometric tail bound
/// (N-1)·C·r^(m_max+2)/(1-r) from the modulus |u(x)-u(y)| ≤ C r^ρ.
NeumannDerivative neumann_derivative(const Sampler& u, const VertexWord& p, int M, int m_max);

struct GaussGreenReport {
  Scalar lhs;  // ∫ (v Δu - u Δv) dμ
  Scalar rhs;  // Σ_{V_M} (v du - u dv)
  Scalar residual;
  /// |Σ_{V_M} du - ∫ Δu dμ| and the same for v.
  Scalar conservation_u;
  Scalar conservation_v;
  /// |E(u,v) - Σ_{V_M} v du + ∫ (Δu) v dμ| when one side is a minimizer
  /// (so E(u,v) is exact).
  std::optional<Scalar> energy_identity;
};

/// Both u and v must lie in D_M (harmonic parts of level ≤ M; otherwise
/// BoundaryMismatch) with cylinder-resolved sources (DomainError).
GaussGreenReport gauss_green_check(const SolutionFunction& u, const SolutionFunction& v, int M);

struct DirichletSolution {
  SolutionFunction u;
  /// max over V₀ of |u(p) - ζ(p)|.
  Scalar boundary_defect;
  LaplacianEstimate estimate;
};

/// u = h - G_μ f with h ≡ ζ(l̇) on [l]. ArityError unless |ζ| = N.
/// `check_level` sets m_max of the attached Laplacian table (M = 0).
DirichletSolution solve_dirichlet(SamplerPtr f, const std::vector<Scalar>& zeta,
                                  int check_level = 4);
DirichletSolution solve_dirichlet(const CylinderFunction& f, const std::vector<Scalar>& zeta,
                                  int check_level = 4);

class IncompatibleError : public Error {
 public:
  IncompatibleError(const std::string& what, std::vector<Scalar> defect)
      : Error(ErrorCode::incompatible, what), defect_(std::move(defect)) {}
  /// ξ(ṗ₁) - ∫_{[p₁]} f dμ per fixed point.
  const std::vector<Scalar>& defect() const noexcept { return defect_; }

 private:
  std::vector<Scalar> defect_;
};

struct NeumannSolution {
  SolutionFunction u;
  /// du at the fixed points, in symbol order.
  std::vector<Scalar> derivatives;
  LaplacianEstimate estimate;
};

/// Returns u = -G_μ f when ξ(ṗ₁) = ∫_{[p₁]} f dμ for every symbol; throws
/// IncompatibleError with the exact defect otherwise.
NeumannSolution solve_neumann(SamplerPtr f, const std::vector<Scalar>& xi, int check_level = 4);
NeumannSolution solve_neumann(const CylinderFunction& f, const std::vector<Scalar>& xi,
                              int check_level = 4);

}  // namespace shiftlap

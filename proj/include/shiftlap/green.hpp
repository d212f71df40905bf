#pragma once

// Green's kernel and operator on the full shift.
//
// g(x, y) = Σ_{m=1}^{ρ(x,y)-1} Σ_{r,s ∈ V_m\V_{m-1}} (G_m)_{rs} χ_r^m(x) χ_s^m(y)
//
// with (G_m)_{rs} = 2/N on the diagonal, 1/N between m-related points and 0
// otherwise. Only the r containing x and the s containing y survive, so the
// level-m term is nonzero iff x_m ≠ x_{m+1} and y_m ≠ y_{m+1}; it is 2/N when
// x_{m+1} = y_{m+1} and 1/N otherwise. For m > κ_x the term vanishes, which
// makes g(x, ·) constant on cylinders of length κ_x + 1.

#include <memory>

#include "shiftlap/functions.hpp"

namespace shiftlap {

/// (G_m)_{pq} for p, q ∈ V_m \ V_{m-1}. DomainError otherwise.
Scalar green_entry(int m, const VertexWord& p, const VertexWord& q, Arith arith = Arith::exact);

/// g(x, y) for distinct points; SamePoint when x = y.
Scalar green_kernel(const VertexWord& x, const VertexWord& y, Arith arith = Arith::exact);

/// The constant value of g(x, ·) on the cylinder [w], valid whenever
/// |w| ≥ κ_x + 1 (the single point x itself is ignored).
Scalar green_kernel_on_cylinder(const VertexWord& x, const CylinderSet& w,
                                Arith arith = Arith::exact);

/// G_μ f for an f with exact cylinder integrals.
class GreenApplication {
 public:
  /// NotIntegrable if f cannot integrate over cylinders.
  explicit GreenApplication(SamplerPtr f);

  const Sampler& source() const noexcept { return *f_; }
  const SamplerPtr& source_ptr() const noexcept { return f_; }
  const Alphabet& alphabet() const noexcept { return f_->alphabet(); }
  Arith arith() const noexcept { return f_->arith(); }

  /// (G_μ f)(x) = Σ_{m ≤ κ_x, x_m≠x_{m+1}} Σ_{b≠x_m} c_b ∫_{[x₁⋯x_m b]} f dμ.
  Scalar value(const VertexWord& x) const;

  /// The same quantity by exact quadrature over all cylinders of length
  /// R+1, R ≥ κ_x. Independent of R; used to certify `value`.
  Scalar value_at_resolution(const VertexWord& x, int resolution) const;

  LevelFunction restrict(int m) const;

  /// H_m(G_μ f)(p) for all p ∈ V_m without forming G_μ f:
  /// -∫_{[p₁⋯p_{m+1}]} f dμ if κ_p ≥ 1, and
  /// ∫_{[p₁]} f dμ - ∫_{[p₁⋯p_{m+1}]} f dμ at the fixed points.
  LevelFunction h_values(int m) const;
  /// H_m(G_μ f)(p) at one point; LevelTooSmall if κ_p > m.
  Scalar h_value(const VertexWord& p, int m) const;

  /// d(G_μ f)(p) = lim -H_m(G_μ f)(p): -∫_{[p₁]} f dμ on V₀, else 0.
  Scalar neumann_limit(const VertexWord& p) const;

  /// ∫_{[w]} f dμ.
  Scalar integral(const CylinderSet& w) const;

 private:
  SamplerPtr f_;
};

GreenApplication apply_green(const CylinderFunction& f);
GreenApplication apply_green(SamplerPtr f);

/// Free-function spelling of GreenApplication::h_values.
LevelFunction green_H_values(const CylinderFunction& f, int m);

/// ∫ (G_μ f) · w dμ for cylinder functions f and w, exactly. Levels ≤ L of
/// the kernel are summed cylinder by cylinder; the tail m > L collapses to
/// N^-(L+2) ∫ f w dμ.
Scalar green_pairing(const CylinderFunction& f, const CylinderFunction& w);

}  // namespace shiftlap

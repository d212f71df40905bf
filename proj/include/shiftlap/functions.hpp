#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "shiftlap/scalar.hpp"
#include "shiftlap/shift_core.hpp"

namespace shiftlap {

/// A function on V_m, stored in LevelIndex order.
class LevelFunction {
 public:
  LevelFunction(Alphabet alphabet, int level, std::vector<Scalar> values);
  static LevelFunction constant(const Alphabet& alphabet, int level, const Scalar& c);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  int level() const noexcept { return level_; }
  Arith arith() const noexcept { return values_.front().arith(); }
  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<Scalar>& values() const noexcept { return values_; }

  const Scalar& operator[](std::size_t i) const { return values_[i]; }
  /// Value at a point of V_m (any written form).
  const Scalar& at(const VertexWord& p) const;

  friend bool operator==(const LevelFunction& a, const LevelFunction& b);

 private:
  Alphabet alphabet_;
  int level_;
  std::vector<Scalar> values_;
};

LevelFunction operator+(const LevelFunction& a, const LevelFunction& b);
LevelFunction operator-(const LevelFunction& a, const LevelFunction& b);
LevelFunction operator*(const Scalar& c, const LevelFunction& a);

/// A function on the shift space constant on every cylinder of length L+1.
/// Entry i is the value on the cylinder spelled by word i of length L+1.
class CylinderFunction {
 public:
  CylinderFunction(Alphabet alphabet, int level, std::vector<Scalar> values);
  static CylinderFunction constant(const Alphabet& alphabet, const Scalar& c);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  int level() const noexcept { return level_; }
  Arith arith() const noexcept { return values_.front().arith(); }
  const std::vector<Scalar>& values() const noexcept { return values_; }
  const Scalar& operator[](std::size_t i) const { return values_[i]; }

  /// The same function stored at a finer level L' ≥ L.
  CylinderFunction refine(int level) const;

  /// Exact ∫ over a cylinder (empty prefix = whole space).
  Scalar integral(const CylinderSet& c) const;
  Scalar integral() const;

  /// Functional equality (compared at the finer of the two levels).
  friend bool operator==(const CylinderFunction& a, const CylinderFunction& b);

 private:
  Alphabet alphabet_;
  int level_;
  std::vector<Scalar> values_;
};

CylinderFunction operator+(const CylinderFunction& a, const CylinderFunction& b);
CylinderFunction operator-(const CylinderFunction& a, const CylinderFunction& b);
CylinderFunction operator*(const Scalar& c, const CylinderFunction& a);
/// Pointwise product (level is the max of the two).
CylinderFunction product(const CylinderFunction& a, const CylinderFunction& b);

/// |u(x) - u(y)| ≤ constant · ratio^ρ(x,y) for all x, y.
struct Modulus {
  Scalar constant;
  Scalar ratio;
};

/// Pointwise evaluator for a continuous function on the shift space.
/// Implementations must be pure. The optional capabilities (exact cylinder
/// integrals, modulus, exact oscillation) unlock Green's operator and the
/// tail bounds.
class Sampler {
 public:
  virtual ~Sampler() = default;

  virtual const Alphabet& alphabet() const = 0;
  virtual Arith arith() const = 0;
  virtual Scalar value(const VertexWord& x) const = 0;

  virtual std::optional<Scalar> integral(const CylinderSet&) const { return std::nullopt; }
  virtual std::optional<Modulus> modulus() const { return std::nullopt; }

  /// Level at which the function is cylinder-constant, if any.
  virtual std::optional<int> resolution() const { return std::nullopt; }

  /// sup over p ∈ V_m and y ∈ [p₁⋯p_{m+1}] of |u(p) - u(y)|, or an upper
  /// bound derived from the modulus.
  virtual std::optional<Scalar> oscillation(int m) const;
};

using SamplerPtr = std::shared_ptr<const Sampler>;

class ConstantSampler final : public Sampler {
 public:
  ConstantSampler(Alphabet alphabet, Scalar c) : alphabet_(alphabet), c_(std::move(c)) {}
  const Alphabet& alphabet() const override { return alphabet_; }
  Arith arith() const override { return c_.arith(); }
  Scalar value(const VertexWord& x) const override;
  std::optional<Scalar> integral(const CylinderSet& c) const override;
  std::optional<Modulus> modulus() const override;
  std::optional<int> resolution() const override { return 0; }
  std::optional<Scalar> oscillation(int) const override { return c_.like(0); }
  const Scalar& constant() const noexcept { return c_; }

 private:
  Alphabet alphabet_;
  Scalar c_;
};

class CylinderSampler final : public Sampler {
 public:
  explicit CylinderSampler(CylinderFunction h) : h_(std::move(h)) {}
  const Alphabet& alphabet() const override { return h_.alphabet(); }
  Arith arith() const override { return h_.arith(); }
  Scalar value(const VertexWord& x) const override;
  std::optional<Scalar> integral(const CylinderSet& c) const override { return h_.integral(c); }
  std::optional<Modulus> modulus() const override;
  std::optional<int> resolution() const override { return h_.level(); }
  std::optional<Scalar> oscillation(int m) const override;
  const CylinderFunction& function() const noexcept { return h_; }

 private:
  CylinderFunction h_;
};

/// u(x) = Σ_{k≥1} a^k [x_k = s] with |a| < 1. Closed form at eventually
/// constant points and over cylinders.
class CoordinateSeriesSampler final : public Sampler {
 public:
  /// `symbol` is 0-based.
  CoordinateSeriesSampler(Alphabet alphabet, Scalar a, Symbol symbol);
  const Alphabet& alphabet() const override { return alphabet_; }
  Arith arith() const override { return a_.arith(); }
  Scalar value(const VertexWord& x) const override;
  std::optional<Scalar> integral(const CylinderSet& c) const override;
  std::optional<Modulus> modulus() const override;
  std::optional<Scalar> oscillation(int m) const override;
  const Scalar& ratio() const noexcept { return a_; }
  Symbol symbol() const noexcept { return symbol_; }

 private:
  Alphabet alphabet_;
  Scalar a_;
  Symbol symbol_;
};

/// Wraps an arbitrary callable; no integrals.
class FunctionSampler final : public Sampler {
 public:
  FunctionSampler(Alphabet alphabet, Arith arith, std::function<Scalar(const VertexWord&)> fn,
                  std::optional<Modulus> modulus = std::nullopt)
      : alphabet_(alphabet), arith_(arith), fn_(std::move(fn)), modulus_(std::move(modulus)) {}
  const Alphabet& alphabet() const override { return alphabet_; }
  Arith arith() const override { return arith_; }
  Scalar value(const VertexWord& x) const override { return fn_(x); }
  std::optional<Modulus> modulus() const override { return modulus_; }

 private:
  Alphabet alphabet_;
  Arith arith_;
  std::function<Scalar(const VertexWord&)> fn_;
  std::optional<Modulus> modulus_;
};

SamplerPtr make_sampler(CylinderFunction h);

/// a·f + b·g. Integrals, modulus and resolution combine when both sides
/// provide them.
SamplerPtr linear_combination(const Scalar& a, SamplerPtr f, const Scalar& b, SamplerPtr g);

/// Value of the cylinder containing x.
Scalar evaluate(const CylinderFunction& h, const VertexWord& x);

/// χ_p^m: 1 on [p₁⋯p_{m+1}], 0 elsewhere. LevelTooSmall if m < κ_p.
CylinderFunction chi_extension(const VertexWord& p, int m, Arith arith = Arith::exact);

/// u_m = Σ_{p∈V_m} u(p) χ_p^m.
CylinderFunction project(const Sampler& u, int m);

/// Pointwise clamp to [0, 1].
LevelFunction clamp(const LevelFunction& u);

LevelFunction restrict(const CylinderFunction& h, int m);
LevelFunction restrict(const Sampler& u, int m);

/// The piecewise-constant extension of data on V_m (the energy minimizer).
CylinderFunction as_cylinder(const LevelFunction& u);

}  // namespace shiftlap

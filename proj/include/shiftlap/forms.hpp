#pragma once

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "shiftlap/functions.hpp"

namespace shiftlap {

/// H_m u(p) = Σ_{j=κ_p}^{m} Σ_{q∈U_{p,j}} (u(q) - u(p)), applied matrix-free.
/// LevelMismatch if u does not live on V_m.
LevelFunction apply_H(int m, const LevelFunction& u);

/// (H_m u)(p) at a single point.
Scalar apply_H_at(int m, const LevelFunction& u, std::size_t index);

/// (H_m u)(p) for any pointwise evaluator; touches only p and its
/// neighbours. LevelTooSmall if κ_p > m.
Scalar apply_H_at(int m, const VertexWord& p, const std::function<Scalar(const VertexWord&)>& u);

struct SparseEntry {
  std::size_t row;
  std::size_t col;
  long value;
};

/// Explicit H_m in coordinate form, row-major. Debugging and symmetry tests
/// only: N^(m+1) rows.
std::vector<SparseEntry> materialize_H(const Alphabet& alphabet, int m);

enum class FormAlgorithm { operator_form, difference_form };

std::string_view algorithm_name(FormAlgorithm a) noexcept;
FormAlgorithm parse_algorithm(std::string_view name);

struct DirichletReport {
  int m;
  Scalar value;
  FormAlgorithm algorithm;
};

/// E_{H_m}(u, v). The operator form is -⟨u, H_m v⟩; the difference form is
/// (1/2) Σ_i Σ_{p∈V_i} Σ_{q∈U_{p,i}} (u(p)-u(q))(v(p)-v(q)).
DirichletReport dirichlet_form(int m, const LevelFunction& u, const LevelFunction& v,
                               FormAlgorithm algorithm = FormAlgorithm::operator_form);

/// E_{H_m}(u, u) via the operator form.
Scalar dirichlet_energy(const LevelFunction& u);

/// E(h) for an energy minimizer: equals E_{H_L}(h|V_L).
Scalar energy_of(const CylinderFunction& h);

struct EnergySequence {
  struct Entry {
    int m;
    Scalar value;
  };
  std::vector<Entry> entries;
  bool monotone = true;
  /// Last computed value; a lower bound for E(u), never a claimed limit.
  Scalar limit_estimate;
  /// E_{H_{m_max}} - E_{H_m}, which tracks E(u - u_m) for u ∈ dom E.
  std::vector<Scalar> tail_gaps;
};

EnergySequence energy_sequence(const Sampler& u, int m_max);

struct MinimizerCertificate {
  bool energy_preserved = false;
  bool first_order = false;
  int perturbations_checked = 0;
  bool perturbations_ok = true;
  /// Smallest E_{H_n}(v) - E_{H_n}(ext) observed over the sampled v.
  std::optional<Scalar> min_energy_gap;

  bool ok() const { return energy_preserved && first_order && perturbations_ok; }
};

struct MinimizerExtension {
  LevelFunction extension;
  Scalar energy;
  MinimizerCertificate certificate;
};

/// Restriction to V_n of the piecewise-constant extension of u, certified by
/// energy equality, (H_n ext)(p) = 0 on V_n \ V_m and `perturbations` random
/// competitors agreeing with u on V_m.
MinimizerExtension minimizer_extension(const LevelFunction& u, int n, int perturbations = 8,
                                       std::uint64_t seed = 0);

}  // namespace shiftlap

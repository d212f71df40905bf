#include "shiftlap/forms.hpp"

#include <algorithm>
#include <random>

#include "shiftlap/error.hpp"

namespace shiftlap {

namespace {

void require_level(int m, const LevelFunction& u) {
  if (u.level() != m)
    throw Error(ErrorCode::level_mismatch, "expected a function on V_" + std::to_string(m) +
                                               ", got level " + std::to_string(u.level()));
}

Scalar h_at(const LevelIndex& idx, const LevelFunction& u, std::size_t i) {
  const int n = idx.n();
  const int m = idx.level();
  const int k = idx.kappa(i);
  Scalar sum = u[i].like(0);
  for (int j = k; j <= m; ++j) {
    const Symbol own = idx.symbol(i, j + 1);
    for (int l = 0; l < n; ++l)
      if (l != own) sum += u[idx.neighbor(i, j, static_cast<Symbol>(l))];
  }
  return sum - u[i] * (static_cast<long>(n - 1) * (m - k + 1));
}

}  // namespace

LevelFunction apply_H(int m, const LevelFunction& u) {
  require_level(m, u);
  LevelIndex idx(u.alphabet(), m);
  std::vector<Scalar> out;
  out.reserve(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out.push_back(h_at(idx, u, i));
  return LevelFunction(u.alphabet(), m, std::move(out));
}

Scalar apply_H_at(int m, const LevelFunction& u, std::size_t index) {
  require_level(m, u);
  LevelIndex idx(u.alphabet(), m);
  if (index >= idx.size()) throw Error(ErrorCode::domain, "point index out of range");
  return h_at(idx, u, index);
}

Scalar apply_H_at(int m, const VertexWord& p,
                  const std::function<Scalar(const VertexWord&)>& u) {
  const int k = kappa(p);
  if (m < k)
    throw Error(ErrorCode::level_too_small, "point " + p.str() + " does not lie in V_" +
                                                std::to_string(m));
  const Scalar at_p = u(p);
  Scalar sum = at_p.like(0);
  for (int j = k; j <= m; ++j)
    for (const auto& q : neighbors(p, j)) sum += u(q) - at_p;
  return sum;
}

std::vector<SparseEntry> materialize_H(const Alphabet& alphabet, int m) {
  LevelIndex idx(alphabet, m);
  const int n = alphabet.size();
  std::vector<SparseEntry> entries;
  std::vector<SparseEntry> row;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    row.clear();
    const int k = idx.kappa(i);
    row.push_back({i, i, -static_cast<long>(n - 1) * (m - k + 1)});
    for (int j = k; j <= m; ++j) {
      const Symbol own = idx.symbol(i, j + 1);
      for (int l = 0; l < n; ++l)
        if (l != own) row.push_back({i, idx.neighbor(i, j, static_cast<Symbol>(l)), 1});
    }
    std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.col < b.col; });
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return entries;
}

std::string_view algorithm_name(FormAlgorithm a) noexcept {
  return a == FormAlgorithm::operator_form ? "operator-form" : "difference-form";
}

FormAlgorithm parse_algorithm(std::string_view name) {
  if (name == "operator-form") return FormAlgorithm::operator_form;
  if (name == "difference-form") return FormAlgorithm::difference_form;
  throw Error(ErrorCode::usage, "unknown Dirichlet form algorithm '" + std::string(name) + "'");
}

DirichletReport dirichlet_form(int m, const LevelFunction& u, const LevelFunction& v,
                               FormAlgorithm algorithm) {
  require_level(m, u);
  require_level(m, v);
  require_same_alphabet(u.alphabet(), v.alphabet());
  LevelIndex idx(u.alphabet(), m);
  Scalar sum = u[0].like(0);

  if (algorithm == FormAlgorithm::operator_form) {
    for (std::size_t i = 0; i < idx.size(); ++i) sum -= u[i] * h_at(idx, v, i);
    return {m, sum, algorithm};
  }

  // Each unordered pair {p, q} with q ∈ U_{p,i} is visited once (l above the
  // own symbol), which absorbs the factor 1/2.
  const int n = idx.n();
  for (int i = 0; i <= m; ++i) {
    const std::size_t count = idx.pow(i + 1);
    for (std::size_t p = 0; p < count; ++p) {
      const std::size_t at = idx.embed_from(p, i);
      const auto own = static_cast<int>(p % static_cast<std::size_t>(n));
      for (int l = own + 1; l < n; ++l) {
        const std::size_t q = idx.neighbor(at, i, static_cast<Symbol>(l));
        sum += (u[at] - u[q]) * (v[at] - v[q]);
      }
    }
  }
  return {m, sum, algorithm};
}

Scalar dirichlet_energy(const LevelFunction& u) {
  return dirichlet_form(u.level(), u, u).value;
}

Scalar energy_of(const CylinderFunction& h) {
  return dirichlet_energy(restrict(h, h.level()));
}

EnergySequence energy_sequence(const Sampler& u, int m_max) {
  if (m_max < 0) throw Error(ErrorCode::level_too_small, "m_max must be >= 0");
  const LevelFunction top = restrict(u, m_max);
  LevelIndex fine(u.alphabet(), m_max);
  EnergySequence seq;
  for (int m = 0; m <= m_max; ++m) {
    LevelIndex idx(u.alphabet(), m);
    std::vector<Scalar> values;
    values.reserve(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) values.push_back(top[fine.embed_from(i, m)]);
    Scalar e = dirichlet_energy(LevelFunction(u.alphabet(), m, std::move(values)));
    if (!seq.entries.empty() && e < seq.entries.back().value) seq.monotone = false;
    seq.entries.push_back({m, std::move(e)});
  }
  seq.limit_estimate = seq.entries.back().value;
  for (const auto& e : seq.entries) seq.tail_gaps.push_back(seq.limit_estimate - e.value);
  return seq;
}

MinimizerExtension minimizer_extension(const LevelFunction& u, int n, int perturbations,
                                       std::uint64_t seed) {
  const int m = u.level();
  if (n <= m)
    throw Error(ErrorCode::level_order, "extension level " + std::to_string(n) +
                                            " must exceed " + std::to_string(m));
  LevelFunction ext = restrict(as_cylinder(u), n);
  Scalar energy = dirichlet_energy(ext);

  MinimizerCertificate cert;
  cert.energy_preserved = energy == dirichlet_energy(u);

  LevelIndex idx(u.alphabet(), n);
  LevelFunction h = apply_H(n, ext);
  std::vector<std::size_t> free_points;
  cert.first_order = true;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx.kappa(i) <= m) continue;
    free_points.push_back(i);
    if (!h[i].is_zero()) cert.first_order = false;
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> num(-6, 6);
  std::uniform_int_distribution<long> den(1, 5);
  for (int t = 0; t < perturbations; ++t) {
    std::vector<Scalar> values = ext.values();
    for (std::size_t i : free_points) values[i] += u[0].like_ratio(num(rng), den(rng));
    Scalar gap = dirichlet_energy(LevelFunction(u.alphabet(), n, std::move(values))) - energy;
    if (gap < 0) cert.perturbations_ok = false;
    if (!cert.min_energy_gap || gap < *cert.min_energy_gap) cert.min_energy_gap = gap;
    ++cert.perturbations_checked;
  }
  return {std::move(ext), std::move(energy), std::move(cert)};
}

}  // namespace shiftlap

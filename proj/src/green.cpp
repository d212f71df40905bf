#include "shiftlap/green.hpp"

#include <algorithm>

#include "shiftlap/error.hpp"

namespace shiftlap {

namespace {

Scalar level_weight(bool same_symbol, int n, Arith arith) {
  return Scalar::ratio(same_symbol ? 2 : 1, n, arith);
}

}  // namespace

Scalar green_entry(int m, const VertexWord& p, const VertexWord& q, Arith arith) {
  require_same_alphabet(p.alphabet(), q.alphabet());
  if (m < 1) throw Error(ErrorCode::domain, "G_m is defined for m >= 1");
  if (kappa(p) != m || kappa(q) != m)
    throw Error(ErrorCode::domain, "G_" + std::to_string(m) + " needs points of V_m \\ V_{m-1}, got " +
                                       p.str() + " and " + q.str());
  const int n = p.alphabet().size();
  if (p == q) return Scalar::ratio(2, n, arith);
  for (int k = 1; k <= m; ++k)
    if (p.at(static_cast<std::size_t>(k)) != q.at(static_cast<std::size_t>(k)))
      return Scalar::zero(arith);
  return Scalar::ratio(1, n, arith);
}

Scalar green_kernel(const VertexWord& x, const VertexWord& y, Arith arith) {
  const int r = rho(x, y);
  if (r == kRhoInfinite)
    throw Error(ErrorCode::same_point, "g(x, x) is undefined (x = " + x.str() + ")");
  const int n = x.alphabet().size();
  Scalar sum = Scalar::zero(arith);
  for (int m = 1; m <= r - 1; ++m) {
    const auto k = static_cast<std::size_t>(m);
    if (x.at(k) != x.at(k + 1) && y.at(k) != y.at(k + 1))
      sum += level_weight(x.at(k + 1) == y.at(k + 1), n, arith);
  }
  return sum;
}

Scalar green_kernel_on_cylinder(const VertexWord& x, const CylinderSet& w, Arith arith) {
  require_same_alphabet(x.alphabet(), w.alphabet());
  const int len = static_cast<int>(w.length());
  if (len < kappa(x) + 1)
    throw Error(ErrorCode::domain, "g(" + x.str() + ", .) is constant only on cylinders of length >= " +
                                       std::to_string(kappa(x) + 1));
  const auto ws = w.prefix();
  int upper = len - 1;
  for (int k = 1; k <= len; ++k)
    if (x.at(static_cast<std::size_t>(k)) != ws[k - 1]) {
      upper = std::min(upper, k - 1);
      break;
    }
  const int n = x.alphabet().size();
  Scalar sum = Scalar::zero(arith);
  for (int m = 1; m <= upper; ++m) {
    const auto k = static_cast<std::size_t>(m);
    if (x.at(k) != x.at(k + 1) && ws[m - 1] != ws[m])
      sum += level_weight(x.at(k + 1) == ws[m], n, arith);
  }
  return sum;
}

GreenApplication::GreenApplication(SamplerPtr f) : f_(std::move(f)) {
  if (!f_) throw Error(ErrorCode::domain, "null source function");
  if (!f_->integral(CylinderSet(f_->alphabet(), {})))
    throw Error(ErrorCode::not_integrable,
                "Green's operator needs a source with exact cylinder integrals");
}

Scalar GreenApplication::integral(const CylinderSet& w) const {
  auto v = f_->integral(w);
  if (!v) throw Error(ErrorCode::not_integrable, "source cannot integrate over [" + w.str() + "]");
  return *std::move(v);
}

Scalar GreenApplication::value(const VertexWord& x) const {
  require_same_alphabet(alphabet(), x.alphabet());
  const int n = alphabet().size();
  const int k = kappa(x);
  Scalar sum = Scalar::zero(arith());
  std::vector<Symbol> prefix;
  for (int m = 1; m <= k; ++m) {
    const auto mm = static_cast<std::size_t>(m);
    prefix.push_back(x.at(mm));
    if (x.at(mm) == x.at(mm + 1)) continue;
    std::vector<Symbol> cyl = prefix;
    cyl.push_back(0);
    for (int b = 0; b < n; ++b) {
      if (b == x.at(mm)) continue;
      cyl.back() = static_cast<Symbol>(b);
      sum += level_weight(b == x.at(mm + 1), n, arith()) * integral(CylinderSet(alphabet(), cyl));
    }
  }
  return sum;
}

Scalar GreenApplication::value_at_resolution(const VertexWord& x, int resolution) const {
  require_same_alphabet(alphabet(), x.alphabet());
  if (resolution < kappa(x))
    throw Error(ErrorCode::level_too_small, "quadrature resolution must be >= kappa(x)");
  LevelIndex idx(alphabet(), resolution);
  Scalar sum = Scalar::zero(arith());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    auto w = idx.word(i);
    CylinderSet cyl(alphabet(), {w.written().begin(), w.written().end()});
    Scalar g = green_kernel_on_cylinder(x, cyl, arith());
    if (!g.is_zero()) sum += g * integral(cyl);
  }
  return sum;
}

LevelFunction GreenApplication::restrict(int m) const {
  LevelIndex idx(alphabet(), m);
  std::vector<Scalar> out;
  out.reserve(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out.push_back(value(idx.word(i)));
  return LevelFunction(alphabet(), m, std::move(out));
}

LevelFunction GreenApplication::h_values(int m) const {
  LevelIndex idx(alphabet(), m);
  std::vector<Scalar> out;
  out.reserve(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    auto w = idx.word(i);
    Scalar inner = integral(CylinderSet(alphabet(), {w.written().begin(), w.written().end()}));
    if (idx.kappa(i) >= 1) {
      out.push_back(-inner);
    } else {
      // Finitely many neighbour points carry no mass.
      out.push_back(integral(CylinderSet(alphabet(), {w.written()[0]})) - inner);
    }
  }
  return LevelFunction(alphabet(), m, std::move(out));
}

Scalar GreenApplication::h_value(const VertexWord& p, int m) const {
  require_same_alphabet(alphabet(), p.alphabet());
  const auto w = p.embed(m);
  Scalar inner = integral(CylinderSet(alphabet(), {w.written().begin(), w.written().end()}));
  if (kappa(p) >= 1) return -inner;
  return integral(CylinderSet(alphabet(), {p.at(1)})) - inner;
}

Scalar GreenApplication::neumann_limit(const VertexWord& p) const {
  require_same_alphabet(alphabet(), p.alphabet());
  if (kappa(p) >= 1) return Scalar::zero(arith());
  return -integral(CylinderSet(alphabet(), {p.at(1)}));
}

GreenApplication apply_green(const CylinderFunction& f) { return GreenApplication(make_sampler(f)); }

GreenApplication apply_green(SamplerPtr f) { return GreenApplication(std::move(f)); }

LevelFunction green_H_values(const CylinderFunction& f, int m) {
  if (m < 0) throw Error(ErrorCode::level_too_small, "level must be >= 0");
  return apply_green(f).h_values(m);
}

Scalar green_pairing(const CylinderFunction& f, const CylinderFunction& w) {
  require_same_alphabet(f.alphabet(), w.alphabet());
  const int level = std::max(f.level(), w.level());
  const CylinderFunction ff = f.refine(level);
  const CylinderFunction wf = w.refine(level);
  const Alphabet& alphabet = f.alphabet();
  const auto n = static_cast<std::size_t>(alphabet.size());
  const Arith arith = f.arith();
  const Scalar nn(static_cast<long>(n), arith);

  // Block sums: sums[k][i] = Σ of level values over the cylinder spelled by
  // word i of length k.
  auto block_sums = [&](const CylinderFunction& h) {
    std::vector<std::vector<Scalar>> sums(static_cast<std::size_t>(level) + 2);
    sums[level + 1] = h.values();
    for (int k = level; k >= 1; --k) {
      const auto& finer = sums[k + 1];
      auto& coarse = sums[k];
      coarse.assign(finer.size() / n, Scalar::zero(arith));
      for (std::size_t i = 0; i < finer.size(); ++i) coarse[i / n] += finer[i];
    }
    return sums;
  };
  const auto fs = block_sums(ff);
  const auto ws = block_sums(wf);
  const Scalar cell = nn.pow(-(level + 1));

  Scalar total = Scalar::zero(arith);
  for (int m = 1; m <= level; ++m) {
    const auto& wa = ws[m + 1];
    const auto& fb = fs[m + 1];
    for (std::size_t a = 0; a < wa.size(); ++a) {
      const std::size_t head = a / n;
      const std::size_t last = a % n;
      const std::size_t before = head % n;
      if (before == last) continue;
      Scalar inner = Scalar::zero(arith);
      for (std::size_t b = 0; b < n; ++b) {
        if (b == before) continue;
        inner += level_weight(b == last, static_cast<int>(n), arith) * fb[head * n + b];
      }
      total += wa[a] * inner;
    }
  }
  total *= cell * cell;

  Scalar fw = Scalar::zero(arith);
  for (std::size_t i = 0; i < ff.values().size(); ++i) fw += ff[i] * wf[i];
  total += fw * cell * nn.pow(-(level + 2));
  return total;
}

}  // namespace shiftlap

#include "shiftlap/functions.hpp"

#include <algorithm>

#include "shiftlap/error.hpp"

namespace shiftlap {

namespace {

void require_level_size(const Alphabet& alphabet, int level, std::size_t size) {
  if (level < 0) throw Error(ErrorCode::level_too_small, "level must be >= 0");
  if (size != alphabet.vertex_count(level))
    throw Error(ErrorCode::domain, "level " + std::to_string(level) + " over N=" +
                                       std::to_string(alphabet.size()) + " needs " +
                                       std::to_string(alphabet.vertex_count(level)) +
                                       " values, got " + std::to_string(size));
}

void require_one_mode(const std::vector<Scalar>& values) {
  for (const auto& v : values)
    if (v.arith() != values.front().arith())
      throw Error(ErrorCode::mode_mismatch, "function values mix arithmetic modes");
}

std::size_t cylinder_index(const CylinderFunction& h, const VertexWord& x) {
  require_same_alphabet(h.alphabet(), x.alphabet());
  const auto n = static_cast<std::size_t>(h.alphabet().size());
  std::size_t i = 0;
  for (int k = 1; k <= h.level() + 1; ++k) i = i * n + x.at(static_cast<std::size_t>(k));
  return i;
}

template <class F, class Op>
F combine(const F& a, const F& b, Op op) {
  require_same_alphabet(a.alphabet(), b.alphabet());
  if (a.level() != b.level())
    throw Error(ErrorCode::level_mismatch, "levels " + std::to_string(a.level()) + " and " +
                                               std::to_string(b.level()) + " differ");
  std::vector<Scalar> out;
  out.reserve(a.values().size());
  for (std::size_t i = 0; i < a.values().size(); ++i) out.push_back(op(a[i], b[i]));
  return F(a.alphabet(), a.level(), std::move(out));
}

}  // namespace

LevelFunction::LevelFunction(Alphabet alphabet, int level, std::vector<Scalar> values)
    : alphabet_(alphabet), level_(level), values_(std::move(values)) {
  require_level_size(alphabet_, level_, values_.size());
  require_one_mode(values_);
}

LevelFunction LevelFunction::constant(const Alphabet& alphabet, int level, const Scalar& c) {
  return LevelFunction(alphabet, level, std::vector<Scalar>(alphabet.vertex_count(level), c));
}

const Scalar& LevelFunction::at(const VertexWord& p) const {
  return values_[LevelIndex(alphabet_, level_).index(p)];
}

bool operator==(const LevelFunction& a, const LevelFunction& b) {
  return a.alphabet_ == b.alphabet_ && a.level_ == b.level_ && a.values_ == b.values_;
}

LevelFunction operator+(const LevelFunction& a, const LevelFunction& b) {
  return combine(a, b, [](const Scalar& x, const Scalar& y) { return x + y; });
}

LevelFunction operator-(const LevelFunction& a, const LevelFunction& b) {
  return combine(a, b, [](const Scalar& x, const Scalar& y) { return x - y; });
}

LevelFunction operator*(const Scalar& c, const LevelFunction& a) {
  std::vector<Scalar> out;
  out.reserve(a.size());
  for (const auto& v : a.values()) out.push_back(c * v);
  return LevelFunction(a.alphabet(), a.level(), std::move(out));
}

CylinderFunction::CylinderFunction(Alphabet alphabet, int level, std::vector<Scalar> values)
    : alphabet_(alphabet), level_(level), values_(std::move(values)) {
  require_level_size(alphabet_, level_, values_.size());
  require_one_mode(values_);
}

CylinderFunction CylinderFunction::constant(const Alphabet& alphabet, const Scalar& c) {
  return CylinderFunction(alphabet, 0, std::vector<Scalar>(static_cast<std::size_t>(alphabet.size()), c));
}

CylinderFunction CylinderFunction::refine(int level) const {
  if (level < level_)
    throw Error(ErrorCode::level_order, "cannot refine level " + std::to_string(level_) +
                                            " to coarser level " + std::to_string(level));
  if (level == level_) return *this;
  LevelIndex fine(alphabet_, level);
  std::vector<Scalar> out;
  out.reserve(fine.size());
  for (std::size_t i = 0; i < fine.size(); ++i) out.push_back(values_[fine.prefix(i, level_ + 1)]);
  return CylinderFunction(alphabet_, level, std::move(out));
}

Scalar CylinderFunction::integral(const CylinderSet& c) const {
  require_same_alphabet(alphabet_, c.alphabet());
  const auto n = static_cast<std::size_t>(alphabet_.size());
  const auto k = static_cast<int>(c.length());
  const int len = level_ + 1;
  std::size_t prefix = 0;
  for (int i = 0; i < std::min(k, len); ++i) prefix = prefix * n + c.prefix()[i];
  const Scalar nn(static_cast<long>(n), arith());
  if (k >= len) return values_[prefix] * nn.pow(-k);
  std::size_t block = 1;
  for (int i = k; i < len; ++i) block *= n;
  Scalar sum = nn.like(0);
  for (std::size_t i = prefix * block; i < (prefix + 1) * block; ++i) sum += values_[i];
  return sum * nn.pow(-len);
}

Scalar CylinderFunction::integral() const { return integral(CylinderSet(alphabet_, {})); }

bool operator==(const CylinderFunction& a, const CylinderFunction& b) {
  if (!(a.alphabet_ == b.alphabet_)) return false;
  int level = std::max(a.level_, b.level_);
  return a.refine(level).values_ == b.refine(level).values_;
}

CylinderFunction operator+(const CylinderFunction& a, const CylinderFunction& b) {
  int level = std::max(a.level(), b.level());
  return combine(a.refine(level), b.refine(level),
                 [](const Scalar& x, const Scalar& y) { return x + y; });
}

CylinderFunction operator-(const CylinderFunction& a, const CylinderFunction& b) {
  int level = std::max(a.level(), b.level());
  return combine(a.refine(level), b.refine(level),
                 [](const Scalar& x, const Scalar& y) { return x - y; });
}

CylinderFunction operator*(const Scalar& c, const CylinderFunction& a) {
  std::vector<Scalar> out;
  out.reserve(a.values().size());
  for (const auto& v : a.values()) out.push_back(c * v);
  return CylinderFunction(a.alphabet(), a.level(), std::move(out));
}

CylinderFunction product(const CylinderFunction& a, const CylinderFunction& b) {
  int level = std::max(a.level(), b.level());
  return combine(a.refine(level), b.refine(level),
                 [](const Scalar& x, const Scalar& y) { return x * y; });
}

std::optional<Scalar> Sampler::oscillation(int m) const {
  auto mod = modulus();
  if (!mod) return std::nullopt;
  // y ∈ [p₁⋯p_{m+1}] forces ρ(p, y) ≥ m+2.
  return mod->constant * mod->ratio.pow(m + 2);
}

Scalar ConstantSampler::value(const VertexWord& x) const {
  require_same_alphabet(alphabet_, x.alphabet());
  return c_;
}

std::optional<Scalar> ConstantSampler::integral(const CylinderSet& c) const {
  return c_ * measure(c, c_.arith());
}

std::optional<Modulus> ConstantSampler::modulus() const {
  return Modulus{c_.like(0), c_.like_ratio(1, 2)};
}

Scalar CylinderSampler::value(const VertexWord& x) const { return evaluate(h_, x); }

std::optional<Modulus> CylinderSampler::modulus() const {
  // Points with ρ > L+1 share a cylinder, so C = 2^(L+1)·(max - min) works
  // with ratio 1/2.
  const auto [lo, hi] = std::minmax_element(h_.values().begin(), h_.values().end());
  Scalar two = h_[0].like(2);
  return Modulus{(*hi - *lo) * two.pow(h_.level() + 1), h_[0].like_ratio(1, 2)};
}

std::optional<Scalar> CylinderSampler::oscillation(int m) const {
  Scalar worst = h_[0].like(0);
  if (m >= h_.level()) return worst;
  LevelIndex coarse(h_.alphabet(), m);
  LevelIndex fine(h_.alphabet(), h_.level());
  const std::size_t block = fine.size() / coarse.size();
  for (std::size_t p = 0; p < coarse.size(); ++p) {
    const Scalar& at_p = h_[fine.embed_from(p, m)];
    for (std::size_t i = p * block; i < (p + 1) * block; ++i) worst = max(worst, (at_p - h_[i]).abs());
  }
  return worst;
}

CoordinateSeriesSampler::CoordinateSeriesSampler(Alphabet alphabet, Scalar a, Symbol symbol)
    : alphabet_(alphabet), a_(std::move(a)), symbol_(symbol) {
  if (!(a_.abs() < 1)) throw Error(ErrorCode::domain, "coordinate series needs |a| < 1");
  if (symbol_ >= alphabet_.size()) throw Error(ErrorCode::domain, "series symbol out of range");
}

Scalar CoordinateSeriesSampler::value(const VertexWord& x) const {
  require_same_alphabet(alphabet_, x.alphabet());
  const auto w = x.written();
  Scalar sum = a_.like(0);
  Scalar power = a_.like(1);
  for (Symbol c : w) {
    power *= a_;
    if (c == symbol_) sum += power;
  }
  // Constant tail Σ_{k>n} a^k.
  if (w.back() == symbol_) sum += power * a_ / (a_.like(1) - a_);
  return sum;
}

std::optional<Scalar> CoordinateSeriesSampler::integral(const CylinderSet& c) const {
  require_same_alphabet(alphabet_, c.alphabet());
  Scalar sum = a_.like(0);
  Scalar power = a_.like(1);
  for (Symbol s : c.prefix()) {
    power *= a_;
    if (s == symbol_) sum += power;
  }
  const long n = alphabet_.size();
  // Free coordinates hit the symbol with probability 1/N.
  sum += power * a_ / ((a_.like(1) - a_) * n);
  return sum * measure(c, a_.arith());
}

std::optional<Modulus> CoordinateSeriesSampler::modulus() const {
  Scalar r = a_.abs();
  return Modulus{a_.like(1) / (a_.like(1) - r), r};
}

std::optional<Scalar> CoordinateSeriesSampler::oscillation(int m) const {
  Scalar r = a_.abs();
  if (a_.sign() >= 0) return r.pow(m + 2) / (a_.like(1) - r);
  return r.pow(m + 2) / (a_.like(1) - r * r);
}

SamplerPtr make_sampler(CylinderFunction h) {
  return std::make_shared<CylinderSampler>(std::move(h));
}

namespace {

class CombinedSampler final : public Sampler {
 public:
  CombinedSampler(Scalar a, SamplerPtr f, Scalar b, SamplerPtr g)
      : a_(std::move(a)), f_(std::move(f)), b_(std::move(b)), g_(std::move(g)) {
    require_same_alphabet(f_->alphabet(), g_->alphabet());
    if (a_.arith() != f_->arith() || b_.arith() != g_->arith() || f_->arith() != g_->arith())
      throw Error(ErrorCode::mode_mismatch, "linear combination mixes arithmetic modes");
  }
  const Alphabet& alphabet() const override { return f_->alphabet(); }
  Arith arith() const override { return f_->arith(); }
  Scalar value(const VertexWord& x) const override { return a_ * f_->value(x) + b_ * g_->value(x); }
  std::optional<Scalar> integral(const CylinderSet& c) const override {
    auto fi = f_->integral(c);
    auto gi = g_->integral(c);
    if (!fi || !gi) return std::nullopt;
    return a_ * *fi + b_ * *gi;
  }
  std::optional<Modulus> modulus() const override {
    auto fm = f_->modulus();
    auto gm = g_->modulus();
    if (!fm || !gm) return std::nullopt;
    return Modulus{a_.abs() * fm->constant + b_.abs() * gm->constant, max(fm->ratio, gm->ratio)};
  }
  std::optional<int> resolution() const override {
    auto fr = f_->resolution();
    auto gr = g_->resolution();
    if (!fr || !gr) return std::nullopt;
    return std::max(*fr, *gr);
  }
  std::optional<Scalar> oscillation(int m) const override {
    auto fo = f_->oscillation(m);
    auto go = g_->oscillation(m);
    if (!fo || !go) return std::nullopt;
    return a_.abs() * *fo + b_.abs() * *go;
  }

 private:
  Scalar a_;
  SamplerPtr f_;
  Scalar b_;
  SamplerPtr g_;
};

}  // namespace

SamplerPtr linear_combination(const Scalar& a, SamplerPtr f, const Scalar& b, SamplerPtr g) {
  return std::make_shared<CombinedSampler>(a, std::move(f), b, std::move(g));
}

Scalar evaluate(const CylinderFunction& h, const VertexWord& x) { return h[cylinder_index(h, x)]; }

CylinderFunction chi_extension(const VertexWord& p, int m, Arith arith) {
  LevelIndex idx(p.alphabet(), m);
  std::size_t at = idx.index(p);
  std::vector<Scalar> values(idx.size(), Scalar::zero(arith));
  values[at] = Scalar::one(arith);
  return CylinderFunction(p.alphabet(), m, std::move(values));
}

CylinderFunction project(const Sampler& u, int m) {
  LevelFunction r = restrict(u, m);
  return CylinderFunction(r.alphabet(), m, r.values());
}

LevelFunction clamp(const LevelFunction& u) {
  std::vector<Scalar> out;
  out.reserve(u.size());
  for (const auto& v : u.values()) {
    if (v >= 1)
      out.push_back(v.like(1));
    else if (v <= 0)
      out.push_back(v.like(0));
    else
      out.push_back(v);
  }
  return LevelFunction(u.alphabet(), u.level(), std::move(out));
}

LevelFunction restrict(const CylinderFunction& h, int m) {
  LevelIndex idx(h.alphabet(), m);
  std::vector<Scalar> out;
  out.reserve(idx.size());
  if (m >= h.level()) {
    for (std::size_t i = 0; i < idx.size(); ++i) out.push_back(h[idx.prefix(i, h.level() + 1)]);
  } else {
    LevelIndex fine(h.alphabet(), h.level());
    for (std::size_t i = 0; i < idx.size(); ++i) out.push_back(h[fine.embed_from(i, m)]);
  }
  return LevelFunction(h.alphabet(), m, std::move(out));
}

LevelFunction restrict(const Sampler& u, int m) {
  LevelIndex idx(u.alphabet(), m);
  std::vector<Scalar> out;
  out.reserve(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out.push_back(u.value(idx.word(i)));
  return LevelFunction(u.alphabet(), m, std::move(out));
}

CylinderFunction as_cylinder(const LevelFunction& u) {
  return CylinderFunction(u.alphabet(), u.level(), u.values());
}

}  // namespace shiftlap

#include "shiftlap/shift_core.hpp"

#include <algorithm>
#include <cmath>

#include "shiftlap/error.hpp"

namespace shiftlap {

Alphabet::Alphabet(int n, std::size_t point_cap) : n_(n), point_cap_(point_cap) {
  if (n < 2) throw Error(ErrorCode::domain, "alphabet needs N >= 2, got " + std::to_string(n));
  if (n > kMaxSymbols)
    throw Error(ErrorCode::domain, "word literals support N <= 9, got " + std::to_string(n));
  if (point_cap == 0) throw Error(ErrorCode::domain, "point cap must be positive");
}

std::size_t Alphabet::vertex_count(int m) const {
  if (m < 0) throw Error(ErrorCode::level_too_small, "level must be >= 0");
  std::size_t count = 1;
  for (int k = 0; k <= m; ++k) {
    if (count > point_cap_ / static_cast<std::size_t>(n_))
      throw Error(ErrorCode::resource_limit, "V_" + std::to_string(m) + " over N=" +
                                                 std::to_string(n_) + " exceeds the point cap of " +
                                                 std::to_string(point_cap_));
    count *= static_cast<std::size_t>(n_);
  }
  return count;
}

void require_same_alphabet(const Alphabet& a, const Alphabet& b) {
  if (!(a == b))
    throw Error(ErrorCode::alphabet_mismatch, "alphabet mismatch: N=" + std::to_string(a.size()) +
                                                  " vs N=" + std::to_string(b.size()));
}

namespace {

int kappa_of(std::span<const Symbol> w) {
  for (std::size_t i = w.size() - 1; i >= 1; --i)
    if (w[i - 1] != w[i]) return static_cast<int>(i);
  return 0;
}

std::vector<Symbol> parse_symbols(const Alphabet& alphabet, std::string_view text,
                                  bool allow_empty) {
  if (text.empty() && !allow_empty) throw Error(ErrorCode::spec, "empty word literal");
  std::vector<Symbol> symbols;
  symbols.reserve(text.size());
  for (char c : text) {
    int d = c - '0';
    if (d < 1 || d > alphabet.size())
      throw Error(ErrorCode::spec, "word '" + std::string(text) + "' has a symbol outside 1.." +
                                       std::to_string(alphabet.size()));
    symbols.push_back(static_cast<Symbol>(d - 1));
  }
  return symbols;
}

std::string symbols_str(std::span<const Symbol> s) {
  std::string out;
  out.reserve(s.size());
  for (Symbol c : s) out.push_back(static_cast<char>('1' + c));
  return out;
}

}  // namespace

VertexWord::VertexWord(Alphabet alphabet, std::vector<Symbol> symbols)
    : alphabet_(alphabet), symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw Error(ErrorCode::domain, "a vertex word needs at least one symbol");
  for (Symbol s : symbols_)
    if (s >= alphabet_.size())
      throw Error(ErrorCode::domain, "symbol out of range for N=" + std::to_string(alphabet_.size()));
}

VertexWord VertexWord::parse(const Alphabet& alphabet, std::string_view text) {
  return VertexWord(alphabet, parse_symbols(alphabet, text, false));
}

VertexWord VertexWord::fixed_point(const Alphabet& alphabet, Symbol l) {
  return VertexWord(alphabet, {l});
}

VertexWord VertexWord::canonical() const {
  std::size_t len = static_cast<std::size_t>(kappa_of(symbols_)) + 1;
  return VertexWord(alphabet_, std::vector<Symbol>(symbols_.begin(), symbols_.begin() + len));
}

VertexWord VertexWord::embed(int m) const {
  int k = kappa_of(symbols_);
  if (m < k)
    throw Error(ErrorCode::level_too_small, "point " + str() + " has kappa " + std::to_string(k) +
                                                " and does not lie in V_" + std::to_string(m));
  std::vector<Symbol> out(static_cast<std::size_t>(m) + 1);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = at(i + 1);
  return VertexWord(alphabet_, std::move(out));
}

std::string VertexWord::str() const { return symbols_str(symbols_); }

bool operator==(const VertexWord& a, const VertexWord& b) {
  if (!(a.alphabet_ == b.alphabet_)) return false;
  std::size_t len = std::max(a.length(), b.length());
  for (std::size_t k = 1; k <= len; ++k)
    if (a.at(k) != b.at(k)) return false;
  return true;
}

int kappa(const VertexWord& p) { return kappa_of(p.written()); }

std::vector<VertexWord> neighbors(const VertexWord& p, int j) {
  if (j < kappa(p))
    throw Error(ErrorCode::level_too_small, "neighbors of " + p.str() + " need j >= kappa = " +
                                                std::to_string(kappa(p)));
  const int n = p.alphabet().size();
  const Symbol own = p.at(static_cast<std::size_t>(j) + 1);
  std::vector<VertexWord> out;
  out.reserve(static_cast<std::size_t>(n) - 1);
  for (int l = 0; l < n; ++l) {
    if (l == own) continue;
    std::vector<Symbol> w(static_cast<std::size_t>(j) + 1);
    for (int k = 1; k <= j; ++k) w[k - 1] = p.at(k);
    w[j] = static_cast<Symbol>(l);
    out.emplace_back(p.alphabet(), std::move(w));
  }
  return out;
}

std::vector<VertexWord> vertex_set(int m, const Alphabet& alphabet) {
  LevelIndex idx(alphabet, m);
  std::vector<VertexWord> out;
  out.reserve(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out.push_back(idx.word(i));
  return out;
}

int rho(const VertexWord& x, const VertexWord& y) {
  require_same_alphabet(x.alphabet(), y.alphabet());
  // Past the longer written length both sequences are constant.
  std::size_t len = std::max(x.length(), y.length());
  for (std::size_t k = 1; k <= len; ++k)
    if (x.at(k) != y.at(k)) return static_cast<int>(k);
  return kRhoInfinite;
}

double distance(const VertexWord& x, const VertexWord& y) {
  int r = rho(x, y);
  return r == kRhoInfinite ? 0.0 : std::ldexp(1.0, -r);
}

CylinderSet::CylinderSet(Alphabet alphabet, std::vector<Symbol> prefix)
    : alphabet_(alphabet), prefix_(std::move(prefix)) {
  for (Symbol s : prefix_)
    if (s >= alphabet_.size())
      throw Error(ErrorCode::domain, "symbol out of range for N=" + std::to_string(alphabet_.size()));
}

CylinderSet CylinderSet::parse(const Alphabet& alphabet, std::string_view text) {
  return CylinderSet(alphabet, parse_symbols(alphabet, text, true));
}

bool CylinderSet::contains(const VertexWord& x) const {
  require_same_alphabet(alphabet_, x.alphabet());
  for (std::size_t k = 1; k <= prefix_.size(); ++k)
    if (x.at(k) != prefix_[k - 1]) return false;
  return true;
}

std::string CylinderSet::str() const { return symbols_str(prefix_); }

Scalar measure(const CylinderSet& c, Arith arith) {
  return Scalar(static_cast<long>(c.alphabet().size()), arith).pow(-static_cast<int>(c.length()));
}

LevelIndex::LevelIndex(const Alphabet& alphabet, int m) : alphabet_(alphabet), m_(m) {
  alphabet_.vertex_count(m);
  const std::size_t n = static_cast<std::size_t>(alphabet_.size());
  pow_.resize(static_cast<std::size_t>(m) + 2);
  repunit_.resize(static_cast<std::size_t>(m) + 2);
  pow_[0] = 1;
  repunit_[0] = 0;
  for (std::size_t k = 1; k < pow_.size(); ++k) {
    pow_[k] = pow_[k - 1] * n;
    repunit_[k] = repunit_[k - 1] * n + 1;
  }
}

std::size_t LevelIndex::index(const VertexWord& p) const {
  require_same_alphabet(alphabet_, p.alphabet());
  if (shiftlap::kappa(p) > m_)
    throw Error(ErrorCode::level_too_small, "point " + p.str() + " does not lie in V_" +
                                                std::to_string(m_));
  std::size_t i = 0;
  for (int k = 1; k <= m_ + 1; ++k) i = i * pow_[1] + p.at(static_cast<std::size_t>(k));
  return i;
}

VertexWord LevelIndex::word(std::size_t i) const {
  std::vector<Symbol> w(static_cast<std::size_t>(m_) + 1);
  for (int k = 1; k <= m_ + 1; ++k) w[k - 1] = symbol(i, k);
  return VertexWord(alphabet_, std::move(w));
}

int LevelIndex::kappa(std::size_t i) const noexcept {
  const std::size_t n = pow_[1];
  std::size_t last = i % n;
  i /= n;
  for (int k = m_; k >= 1; --k) {
    if (i % n != last) return k;
    i /= n;
  }
  return 0;
}

}  // namespace shiftlap

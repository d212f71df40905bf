#pragma once

// Points, words and cylinders of the one-sided full shift over N symbols.
//
// Symbols are 0-based in memory and 1-based in text ("1211"). A point of V_m
// is an eventually constant sequence, written as a word of length m+1 whose
// last symbol repeats forever.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shiftlap/scalar.hpp"

namespace shiftlap {

inline constexpr std::size_t kDefaultPointCap = std::size_t{1} << 20;
inline constexpr int kMaxSymbols = 9;

using Symbol = std::uint8_t;

class Alphabet {
 public:
  explicit Alphabet(int n, std::size_t point_cap = kDefaultPointCap);

  int size() const noexcept { return n_; }
  std::size_t point_cap() const noexcept { return point_cap_; }

  /// N^(m+1), the number of points of V_m; ResourceLimit above the cap.
  std::size_t vertex_count(int m) const;

  friend bool operator==(const Alphabet& a, const Alphabet& b) noexcept { return a.n_ == b.n_; }

 private:
  int n_;
  std::size_t point_cap_;
};

void require_same_alphabet(const Alphabet& a, const Alphabet& b);

class VertexWord {
 public:
  /// `symbols` are 0-based; must be nonempty and below N.
  VertexWord(Alphabet alphabet, std::vector<Symbol> symbols);

  /// Parses a 1-based digit string such as "1211".
  static VertexWord parse(const Alphabet& alphabet, std::string_view text);

  /// The fixed point (l̇), l 0-based.
  static VertexWord fixed_point(const Alphabet& alphabet, Symbol l);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::span<const Symbol> written() const noexcept { return symbols_; }
  std::size_t length() const noexcept { return symbols_.size(); }

  /// Coordinate k (1-based) of the infinite sequence.
  Symbol at(std::size_t k) const noexcept {
    return k <= symbols_.size() ? symbols_[k - 1] : symbols_.back();
  }

  /// Length κ_p + 1 form with the repeated tail stripped.
  VertexWord canonical() const;

  /// The same point written with m+1 symbols; requires m ≥ κ_p.
  VertexWord embed(int m) const;

  /// Written form, 1-based digits.
  std::string str() const;

  /// Point equality (canonical forms agree).
  friend bool operator==(const VertexWord& a, const VertexWord& b);

 private:
  Alphabet alphabet_;
  std::vector<Symbol> symbols_;
};

/// min{ j : p ∈ V_j }.
int kappa(const VertexWord& p);

/// U_{p,j}: the N-1 points (p₁⋯p_j l̇) with l ≠ p_{j+1}, each written at
/// level j. Throws LevelTooSmall if j < κ_p.
std::vector<VertexWord> neighbors(const VertexWord& p, int j);

/// All words of length m+1 in lexicographic order.
std::vector<VertexWord> vertex_set(int m, const Alphabet& alphabet);

inline constexpr int kRhoInfinite = std::numeric_limits<int>::max();

/// First index where the two sequences disagree; kRhoInfinite for equal
/// points.
int rho(const VertexWord& x, const VertexWord& y);

/// d(x, y) = 2^(-ρ(x, y)).
double distance(const VertexWord& x, const VertexWord& y);

class CylinderSet {
 public:
  /// `prefix` is 0-based and may be empty (the whole space).
  CylinderSet(Alphabet alphabet, std::vector<Symbol> prefix);
  static CylinderSet parse(const Alphabet& alphabet, std::string_view text);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::span<const Symbol> prefix() const noexcept { return prefix_; }
  std::size_t length() const noexcept { return prefix_.size(); }
  bool contains(const VertexWord& x) const;
  std::string str() const;

 private:
  Alphabet alphabet_;
  std::vector<Symbol> prefix_;
};

/// μ([p₁⋯p_m]) = N^(-m).
Scalar measure(const CylinderSet& c, Arith arith = Arith::exact);

/// Array indexing for V_m. Word w of length m+1 sits at
/// Σ_i w_i · N^(m-i) (0-based symbols and positions).
class LevelIndex {
 public:
  LevelIndex(const Alphabet& alphabet, int m);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  int level() const noexcept { return m_; }
  int n() const noexcept { return alphabet_.size(); }
  std::size_t size() const noexcept { return pow_[m_ + 1]; }

  /// N^k for 0 ≤ k ≤ m+1.
  std::size_t pow(int k) const noexcept { return pow_[k]; }

  /// Index of p embedded at this level; LevelTooSmall if κ_p > m.
  std::size_t index(const VertexWord& p) const;
  VertexWord word(std::size_t i) const;

  /// Coordinate k (1-based, 1 ≤ k ≤ m+1) of the word at index i.
  Symbol symbol(std::size_t i, int k) const noexcept {
    return static_cast<Symbol>((i / pow_[m_ + 1 - k]) % pow_[1]);
  }

  int kappa(std::size_t i) const noexcept;

  /// Index (among words of length len) of the first len symbols.
  std::size_t prefix(std::size_t i, int len) const noexcept { return i / pow_[m_ + 1 - len]; }

  /// Index at this level of the point (w₁⋯w_j l̇), w the word at i, j ≤ m.
  std::size_t neighbor(std::size_t i, int j, Symbol l) const noexcept {
    return prefix(i, j) * pow_[m_ + 1 - j] + l * repunit_[m_ + 1 - j];
  }

  /// Index at this level of a word of length len+1 ≤ m+1 (a point of V_len),
  /// given by its index among words of that length.
  std::size_t embed_from(std::size_t i, int len) const noexcept {
    Symbol last = static_cast<Symbol>(i % pow_[1]);
    return i * pow_[m_ - len] + last * repunit_[m_ - len];
  }

 private:
  Alphabet alphabet_;
  int m_;
  std::vector<std::size_t> pow_;      // N^k
  std::vector<std::size_t> repunit_;  // (N^k - 1)/(N - 1)
};

}  // namespace shiftlap

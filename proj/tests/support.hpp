#pragma once

#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "shiftlap/boundary.hpp"

namespace testing {

using namespace shiftlap;

inline VertexWord W(int n, const std::string& text) { return VertexWord::parse(Alphabet(n), text); }

inline Scalar Q(long num, long den = 1) { return Scalar::ratio(num, den, Arith::exact); }

inline Scalar random_rational(std::mt19937_64& rng, long span = 9, long den_max = 6) {
  std::uniform_int_distribution<long> num(-span, span);
  std::uniform_int_distribution<long> den(1, den_max);
  return Q(num(rng), den(rng));
}

inline LevelFunction random_level(const Alphabet& a, int m, std::mt19937_64& rng) {
  std::vector<Scalar> v;
  for (std::size_t i = 0; i < a.vertex_count(m); ++i) v.push_back(random_rational(rng));
  return LevelFunction(a, m, std::move(v));
}

inline CylinderFunction random_cylinder(const Alphabet& a, int level, std::mt19937_64& rng) {
  std::vector<Scalar> v;
  for (std::size_t i = 0; i < a.vertex_count(level); ++i) v.push_back(random_rational(rng));
  return CylinderFunction(a, level, std::move(v));
}

inline LevelFunction level_of(int n, int m, std::vector<Scalar> values) {
  return LevelFunction(Alphabet(n), m, std::move(values));
}

/// Library level data keyed by word literals for the oracles.
inline oracle::Values to_oracle(const LevelFunction& u) {
  oracle::Values out;
  LevelIndex idx(u.alphabet(), u.level());
  for (std::size_t i = 0; i < idx.size(); ++i) out[idx.word(i).str()] = u[i].rational();
  return out;
}

inline oracle::Values to_oracle(const CylinderFunction& f) {
  oracle::Values out;
  LevelIndex idx(f.alphabet(), f.level());
  for (std::size_t i = 0; i < idx.size(); ++i) out[idx.word(i).str()] = f[i].rational();
  return out;
}

inline std::vector<Scalar> Qs(std::initializer_list<std::pair<long, long>> v) {
  std::vector<Scalar> out;
  for (auto [p, q] : v) out.push_back(Q(p, q));
  return out;
}

inline std::vector<Scalar> Zs(std::initializer_list<long> v) {
  std::vector<Scalar> out;
  for (long p : v) out.push_back(Q(p));
  return out;
}

}  // namespace testing

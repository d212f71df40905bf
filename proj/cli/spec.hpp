#pragma once

// Function specs: JSON documents or shorthands naming a function on the
// shift space.
//
//   {"kind":"constant","value":"c"}
//   {"kind":"cylinder","N":2,"level":1,"values":{"11":"0","12":"1",...}}
//   {"kind":"coordinate-series","a":"1/2","symbol":1}
//   {"kind":"green","f":<spec>}                        u = -G_μ f
//   {"kind":"solution","harmonic":<spec>,"f":<spec>}   u = h - G_μ f
//
// Shorthands: const:c, chi:WORD@m, series:a,s, green:<spec>, inline JSON, or
// a path to a JSON file.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "shiftlap/boundary.hpp"

namespace shiftlap::cli {

using nlohmann::json;

/// Expands a shorthand (or reads a file) into canonical JSON.
json expand_spec(std::string_view text, const Alphabet& alphabet, Arith arith);

/// A spec resolved against an alphabet and arithmetic mode.
struct ParsedFunction {
  json canonical;
  SamplerPtr sampler;
  /// Present when the function is exactly representable as h - G_μ f.
  std::optional<SolutionFunction> solution;
  /// Present for constant and cylinder kinds.
  std::optional<CylinderFunction> cylinder;
};

ParsedFunction parse_function(const json& spec, const Alphabet& alphabet, Arith arith);
ParsedFunction parse_function(std::string_view text, const Alphabet& alphabet, Arith arith);

/// Comma-separated values or a JSON array of numbers/strings.
std::vector<Scalar> parse_values(std::string_view text, Arith arith);

/// Comma- or whitespace-separated words, or a path to a file of them.
std::vector<VertexWord> parse_points(std::string_view text, const Alphabet& alphabet);

/// Canonical JSON of a cylinder function.
json cylinder_json(const CylinderFunction& h);

}  // namespace shiftlap::cli

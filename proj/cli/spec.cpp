#include "spec.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace shiftlap::cli {

namespace {

[[noreturn]] void spec_error(const std::string& what) { throw Error(ErrorCode::spec, what); }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) spec_error("cannot read '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

bool is_file(std::string_view text) {
  std::error_code ec;
  return !text.empty() && std::filesystem::is_regular_file(std::filesystem::path(text), ec);
}

std::vector<std::string> split(std::string_view text, std::string_view seps) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (seps.find(c) != std::string_view::npos) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

Scalar number(const json& v, Arith arith, const std::string& field) {
  if (v.is_string()) return Scalar::parse(v.get<std::string>(), arith);
  if (v.is_number()) return Scalar::parse(v.dump(), arith);
  spec_error("field '" + field + "' must be a number or a \"p/q\" string");
}

int integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) spec_error("field '" + field + "' must be an integer");
  return v.get<int>();
}

const json& field(const json& spec, const char* name) {
  auto it = spec.find(name);
  if (it == spec.end()) spec_error(std::string("missing field '") + name + "'");
  return *it;
}

void allow_only(const json& spec, std::initializer_list<const char*> names) {
  std::set<std::string> allowed(names.begin(), names.end());
  for (const auto& [key, value] : spec.items())
    if (!allowed.count(key)) spec_error("unexpected field '" + key + "'");
}

CylinderFunction parse_cylinder(const json& spec, const Alphabet& alphabet, Arith arith) {
  allow_only(spec, {"kind", "N", "level", "values"});
  if (spec.contains("N") && integer(spec["N"], "N") != alphabet.size())
    throw Error(ErrorCode::alphabet_mismatch, "spec is for N = " + spec["N"].dump() +
                                                  ", run uses N = " + std::to_string(alphabet.size()));
  const int level = integer(field(spec, "level"), "level");
  if (level < 0) spec_error("level must be >= 0");
  const json& values = field(spec, "values");
  if (!values.is_object()) spec_error("'values' must map words to numbers");
  LevelIndex idx(alphabet, level);
  std::vector<std::optional<Scalar>> slots(idx.size());
  for (const auto& [key, value] : values.items()) {
    if (static_cast<int>(key.size()) != level + 1)
      spec_error("key '" + key + "' must have " + std::to_string(level + 1) + " symbols");
    const auto i = idx.index(VertexWord::parse(alphabet, key));
    slots[i] = number(value, arith, key);
  }
  std::vector<Scalar> out;
  out.reserve(slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i]) spec_error("missing value for word '" + idx.word(i).str() + "'");
    out.push_back(*std::move(slots[i]));
  }
  return CylinderFunction(alphabet, level, std::move(out));
}

std::string kind_of(const json& spec) {
  if (!spec.is_object()) spec_error("a function spec must be a JSON object");
  const json& k = field(spec, "kind");
  if (!k.is_string()) spec_error("'kind' must be a string");
  return k.get<std::string>();
}

// A sampler evaluating an exact solution pointwise.
SamplerPtr solution_sampler(const SolutionFunction& u) {
  return std::make_shared<FunctionSampler>(u.alphabet(), u.arith(),
                                           [u](const VertexWord& x) { return u.value(x); });
}

}  // namespace

json cylinder_json(const CylinderFunction& h) {
  json values = json::object();
  LevelIndex idx(h.alphabet(), h.level());
  for (std::size_t i = 0; i < idx.size(); ++i) values[idx.word(i).str()] = h[i].str();
  return {{"kind", "cylinder"}, {"N", h.alphabet().size()}, {"level", h.level()}, {"values", values}};
}

json expand_spec(std::string_view text, const Alphabet& alphabet, Arith arith) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  if (text.empty()) spec_error("empty function spec");
  if (text.front() == '{') {
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      spec_error(std::string("malformed JSON: ") + e.what());
    }
  }
  auto tail = [&](std::string_view prefix) { return text.substr(prefix.size()); };
  if (text.starts_with("const:")) {
    Scalar::parse(tail("const:"), arith);
    return {{"kind", "constant"}, {"value", std::string(tail("const:"))}};
  }
  if (text.starts_with("chi:")) {
    std::string_view body = tail("chi:");
    const auto at = body.find('@');
    const std::string word(body.substr(0, at));
    const auto p = VertexWord::parse(alphabet, word);
    int m = static_cast<int>(word.size()) - 1;
    if (at != std::string_view::npos) {
      const std::string lv(body.substr(at + 1));
      if (lv.empty() || lv.find_first_not_of("0123456789") != std::string::npos)
        spec_error("bad level in '" + std::string(text) + "'");
      m = std::stoi(lv);
    }
    return cylinder_json(chi_extension(p, m, arith));
  }
  if (text.starts_with("series:")) {
    const auto parts = split(tail("series:"), ",");
    if (parts.size() != 2) spec_error("series shorthand is series:a,s");
    if (parts[1].find_first_not_of("0123456789") != std::string::npos)
      spec_error("series symbol must be a positive integer");
    return {{"kind", "coordinate-series"}, {"a", parts[0]}, {"symbol", std::stoi(parts[1])}};
  }
  if (text.starts_with("green:"))
    return {{"kind", "green"}, {"f", expand_spec(tail("green:"), alphabet, arith)}};
  if (is_file(text)) return expand_spec(read_file(std::string(text)), alphabet, arith);
  spec_error("unrecognized function spec '" + std::string(text) + "'");
}

ParsedFunction parse_function(const json& spec, const Alphabet& alphabet, Arith arith) {
  const std::string kind = kind_of(spec);
  ParsedFunction out;
  out.canonical = spec;

  if (kind == "constant") {
    allow_only(spec, {"kind", "value"});
    Scalar c = number(field(spec, "value"), arith, "value");
    out.cylinder = CylinderFunction::constant(alphabet, c);
    out.sampler = std::make_shared<ConstantSampler>(alphabet, std::move(c));
    out.solution = SolutionFunction::minimizer(*out.cylinder);
  } else if (kind == "cylinder") {
    out.cylinder = parse_cylinder(spec, alphabet, arith);
    out.sampler = make_sampler(*out.cylinder);
    out.solution = SolutionFunction::minimizer(*out.cylinder);
  } else if (kind == "coordinate-series") {
    allow_only(spec, {"kind", "a", "symbol"});
    const int s = integer(field(spec, "symbol"), "symbol");
    if (s < 1 || s > alphabet.size())
      spec_error("symbol must lie in 1.." + std::to_string(alphabet.size()));
    out.sampler = std::make_shared<CoordinateSeriesSampler>(
        alphabet, number(field(spec, "a"), arith, "a"), static_cast<Symbol>(s - 1));
  } else if (kind == "green") {
    allow_only(spec, {"kind", "f"});
    auto f = parse_function(field(spec, "f"), alphabet, arith);
    out.canonical["f"] = f.canonical;
    out.solution = SolutionFunction::green(f.sampler);
    out.sampler = solution_sampler(*out.solution);
  } else if (kind == "solution") {
    allow_only(spec, {"kind", "harmonic", "f"});
    auto h = parse_function(field(spec, "harmonic"), alphabet, arith);
    if (!h.cylinder) spec_error("the harmonic part must be a constant or cylinder function");
    out.canonical["harmonic"] = h.canonical;
    std::optional<GreenApplication> g;
    if (spec.contains("f")) {
      auto f = parse_function(spec["f"], alphabet, arith);
      out.canonical["f"] = f.canonical;
      g.emplace(f.sampler);
    }
    out.solution = SolutionFunction(*h.cylinder, std::move(g));
    out.sampler = solution_sampler(*out.solution);
  } else {
    spec_error("unknown function kind '" + kind + "'");
  }
  return out;
}

ParsedFunction parse_function(std::string_view text, const Alphabet& alphabet, Arith arith) {
  json spec = expand_spec(text, alphabet, arith);
  // Nested shorthands inside JSON documents are allowed as plain strings.
  std::function<void(json&)> expand_nested = [&](json& node) {
    for (const char* key : {"f", "harmonic"})
      if (node.is_object() && node.contains(key)) {
        if (node[key].is_string()) node[key] = expand_spec(node[key].get<std::string>(), alphabet, arith);
        expand_nested(node[key]);
      }
  };
  expand_nested(spec);
  return parse_function(spec, alphabet, arith);
}

std::vector<Scalar> parse_values(std::string_view text, Arith arith) {
  std::vector<Scalar> out;
  std::string_view t = text;
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.remove_prefix(1);
  if (!t.empty() && t.front() == '[') {
    json arr;
    try {
      arr = json::parse(t);
    } catch (const json::parse_error& e) {
      spec_error(std::string("malformed JSON array: ") + e.what());
    }
    for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(number(arr[i], arith, std::to_string(i)));
    return out;
  }
  for (const auto& part : split(text, ", ")) out.push_back(Scalar::parse(part, arith));
  if (out.empty()) spec_error("no values given");
  return out;
}

std::vector<VertexWord> parse_points(std::string_view text, const Alphabet& alphabet) {
  const std::string body = is_file(text) ? read_file(std::string(text)) : std::string(text);
  std::vector<VertexWord> out;
  for (const auto& w : split(body, ", \t\r\n")) out.push_back(VertexWord::parse(alphabet, w));
  if (out.empty()) spec_error("no points given");
  return out;
}

}  // namespace shiftlap::cli

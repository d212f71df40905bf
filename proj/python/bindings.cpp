#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "run.hpp"
#include "spec.hpp"
#include "shiftlap/verify.hpp"

namespace py = pybind11;
using namespace shiftlap;

namespace {

std::vector<std::string> strs(const std::vector<Scalar>& v) {
  std::vector<std::string> out;
  for (const auto& s : v) out.push_back(s.str());
  return out;
}

std::vector<Scalar> scalars(const std::vector<std::string>& v, Arith arith) {
  std::vector<Scalar> out;
  for (const auto& s : v) out.push_back(Scalar::parse(s, arith));
  return out;
}

cli::ParsedFunction function(const std::string& spec, int n, const std::string& mode) {
  return cli::parse_function(std::string_view(spec), Alphabet(n), parse_arith(mode));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Laplacians, Green's operator and boundary value problems on the full shift";

  py::register_exception<Error>(m, "ShiftlapError");

  m.def(
      "green_kernel",
      [](const std::string& x, const std::string& y, int n, const std::string& mode) {
        Alphabet a(n);
        return green_kernel(VertexWord::parse(a, x), VertexWord::parse(a, y), parse_arith(mode)).str();
      },
      py::arg("x"), py::arg("y"), py::arg("N") = 2, py::arg("mode") = "rational");

  m.def(
      "green_apply",
      [](const std::string& f, const std::vector<std::string>& points, int n, const std::string& mode) {
        GreenApplication g(function(f, n, mode).sampler);
        std::vector<std::string> out;
        for (const auto& p : points) out.push_back(g.value(VertexWord::parse(Alphabet(n), p)).str());
        return out;
      },
      py::arg("f"), py::arg("points"), py::arg("N") = 2, py::arg("mode") = "rational");

  m.def(
      "apply_H",
      [](int level, const std::vector<std::string>& values, int n, const std::string& mode) {
        return strs(apply_H(level, LevelFunction(Alphabet(n), level, scalars(values, parse_arith(mode)))).values());
      },
      py::arg("m"), py::arg("values"), py::arg("N") = 2, py::arg("mode") = "rational",
      "H_m applied to values listed in lexicographic word order.");

  m.def(
      "dirichlet_form",
      [](int level, const std::vector<std::string>& u, const std::vector<std::string>& v, int n,
         const std::string& mode, const std::string& algorithm) {
        const Arith arith = parse_arith(mode);
        Alphabet a(n);
        return dirichlet_form(level, LevelFunction(a, level, scalars(u, arith)),
                              LevelFunction(a, level, scalars(v, arith)), parse_algorithm(algorithm))
            .value.str();
      },
      py::arg("m"), py::arg("u"), py::arg("v"), py::arg("N") = 2, py::arg("mode") = "rational",
      py::arg("algorithm") = "operator-form");

  m.def(
      "solve_dirichlet",
      [](const std::string& f, const std::vector<std::string>& zeta, const std::vector<std::string>& points, int n,
         const std::string& mode) {
        const Arith arith = parse_arith(mode);
        auto sol = solve_dirichlet(function(f, n, mode).sampler, scalars(zeta, arith));
        std::vector<std::string> out;
        for (const auto& p : points) out.push_back(sol.u.value(VertexWord::parse(Alphabet(n), p)).str());
        return out;
      },
      py::arg("f"), py::arg("zeta"), py::arg("points"), py::arg("N") = 2, py::arg("mode") = "rational");

  m.def(
      "neumann_derivatives",
      [](const std::string& f, const std::vector<std::string>& xi, int n, const std::string& mode) {
        return strs(solve_neumann(function(f, n, mode).sampler, scalars(xi, parse_arith(mode))).derivatives);
      },
      py::arg("f"), py::arg("xi"), py::arg("N") = 2, py::arg("mode") = "rational");

  m.def(
      "verify",
      [](int n, int m_max, std::uint64_t seed, const std::string& mode) {
        auto rep = run_verification({n, m_max, seed, parse_arith(mode), 6});
        py::dict out;
        for (const auto& c : rep.checks) out[py::str(c.name)] = c.passed;
        return out;
      },
      py::arg("N") = 2, py::arg("mmax") = 4, py::arg("seed") = 0, py::arg("mode") = "rational");

  m.def(
      "run",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs a CLI command; returns (exit_code, stdout, stderr).");
}

#include "run.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "spec.hpp"
#include "shiftlap/verify.hpp"

namespace shiftlap::cli {

namespace {

using record = nlohmann::ordered_json;

struct RunConfig {
  int n = 2;
  std::string mode = "rational";
  std::size_t point_cap = kDefaultPointCap;
  std::string format = "json";
  bool csv = false;
  std::uint64_t seed = 0;
  std::string config;
};

struct Output {
  std::vector<record> rows;
  std::optional<record> summary;
  int exit = kOk;
};

struct Context {
  RunConfig cfg;
  Alphabet alphabet{2};
  Arith arith = Arith::exact;

  record base(const std::string& command) const {
    return {{"command", command}, {"N", cfg.n}, {"mode", cfg.mode}, {"seed", cfg.seed}};
  }
  ParsedFunction fn(const std::string& text) const { return parse_function(std::string_view(text), alphabet, arith); }
  VertexWord point(const std::string& text) const { return VertexWord::parse(alphabet, text); }
};

std::string csv_cell(const record& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

void print_csv(const std::vector<record>& rows, std::ostream& out) {
  if (rows.empty()) return;
  std::vector<std::string> keys;
  for (const auto& row : rows)
    for (const auto& [k, v] : row.items())
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
  for (std::size_t i = 0; i < keys.size(); ++i) out << (i ? "," : "") << keys[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < keys.size(); ++i) {
      if (i) out << ',';
      if (row.contains(keys[i])) out << csv_cell(row[keys[i]]);
    }
    out << '\n';
  }
}

void emit(const Output& o, bool csv, std::ostream& out) {
  if (csv) {
    if (!o.rows.empty())
      print_csv(o.rows, out);
    else if (o.summary)
      print_csv({*o.summary}, out);
    return;
  }
  for (const auto& r : o.rows) out << r.dump() << '\n';
  if (o.summary) out << o.summary->dump() << '\n';
}

record opt_scalar(const std::optional<Scalar>& s) {
  return s ? record(s->str()) : record(nullptr);
}

record scalars(const std::vector<Scalar>& v) {
  record arr = record::array();
  for (const auto& s : v) arr.push_back(s.str());
  return arr;
}

void residual_rows(const Context& ctx, const std::string& command, const LaplacianEstimate& est,
                   Output& o) {
  for (const auto& row : est.rows) {
    record r = ctx.base(command);
    r["M"] = est.M;
    r["m"] = row.m;
    r["residual"] = row.residual.str();
    r["worst_point"] = row.worst_point;
    r["bound"] = opt_scalar(row.bound);
    o.rows.push_back(std::move(r));
  }
}

record residual_array(const LaplacianEstimate& est) {
  record arr = record::array();
  for (const auto& row : est.rows)
    arr.push_back({{"m", row.m}, {"residual", row.residual.str()}, {"bound", opt_scalar(row.bound)}});
  return arr;
}

// Loads --config JSON and appends its entries as flags that were not given
// explicitly on the command line.
std::vector<std::string> apply_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].starts_with("--config=")) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::usage, "cannot read config '" + path + "'");
  nlohmann::json cfg;
  try {
    in >> cfg;
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::usage, std::string("malformed config: ") + e.what());
  }
  if (!cfg.is_object()) throw Error(ErrorCode::usage, "config must be a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    const bool given = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.starts_with(flag + "=");
    });
    if (given || key == "config") continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else {
      args.push_back(flag);
      args.push_back(value.is_string() ? value.get<std::string>() : value.dump());
    }
  }
  return args;
}

int exit_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::usage:
    case ErrorCode::spec:
      return kUsage;
    case ErrorCode::incompatible:
      return kIncompatible;
    default:
      return kDomain;
  }
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Laplacians, Green's operator and boundary value problems on the full shift",
               "shiftlap"};
  app.fallthrough();
  app.require_subcommand(1);

  Context ctx;
  RunConfig& cfg = ctx.cfg;
  app.add_option("--N", cfg.n, "Number of symbols (2..9)")->capture_default_str();
  app.add_option("--mode", cfg.mode, "Arithmetic: rational or float64")
      ->check(CLI::IsMember({"rational", "exact", "float64", "float"}))
      ->capture_default_str();
  app.add_option("--point-cap", cfg.point_cap, "Largest vertex set that may be enumerated")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--csv", cfg.csv, "Shorthand for --format csv");
  app.add_option("--seed", cfg.seed, "Seed for randomized suites")->capture_default_str();
  app.add_option("--config", cfg.config, "JSON file with default flag values");

  std::function<Output()> action;
  auto command = [&](const char* name, const char* help) { return app.add_subcommand(name, help); };

  // green-kernel
  std::string x, y;
  auto* gk = command("green-kernel", "Green's kernel g(x, y)");
  gk->add_option("--x", x, "First point")->required();
  gk->add_option("--y", y, "Second point")->required();
  gk->callback([&] {
    action = [&] {
      Output o;
      record r = ctx.base("green-kernel");
      r["x"] = x;
      r["y"] = y;
      r["value"] = green_kernel(ctx.point(x), ctx.point(y), ctx.arith).str();
      o.summary = std::move(r);
      return o;
    };
  });

  // green-apply
  std::string f_spec, points;
  auto* ga = command("green-apply", "Evaluate G_mu f at points");
  ga->add_option("--f", f_spec, "Source function spec")->required();
  ga->add_option("--points", points, "Comma-separated words or a file of words")->required();
  ga->callback([&] {
    action = [&] {
      Output o;
      auto f = ctx.fn(f_spec);
      GreenApplication g(f.sampler);
      for (const auto& p : parse_points(points, ctx.alphabet)) {
        record r = ctx.base("green-apply");
        r["point"] = p.str();
        r["value"] = g.value(p).str();
        o.rows.push_back(std::move(r));
      }
      return o;
    };
  });

  // laplacian
  std::string u_spec;
  int M = 0, mmax = 6;
  auto* lp = command("laplacian", "Renormalized Laplacian residual table");
  lp->add_option("--u", u_spec, "Function spec")->required();
  lp->add_option("--f", f_spec, "Candidate Laplacian spec")->required();
  lp->add_option("--M", M, "Boundary index")->capture_default_str();
  lp->add_option("--mmax", mmax, "Largest level")->capture_default_str();
  lp->callback([&] {
    action = [&] {
      Output o;
      auto u = ctx.fn(u_spec);
      auto f = ctx.fn(f_spec);
      auto est = u.solution ? laplacian_estimate(*u.solution, *f.sampler, M, mmax)
                            : laplacian_estimate(*u.sampler, *f.sampler, M, mmax);
      residual_rows(ctx, "laplacian", est, o);
      record s = ctx.base("laplacian");
      s["M"] = M;
      s["non_increasing"] = est.non_increasing;
      s["exact"] = est.exact;
      o.summary = std::move(s);
      return o;
    };
  });

  // weak-residual
  int test_level = 1;
  auto* wr = command("weak-residual", "Weak-formulation residual against chi test functions");
  wr->add_option("--u", u_spec, "Function spec (constant, cylinder, green or solution)")->required();
  wr->add_option("--f", f_spec, "Candidate Laplacian spec")->required();
  wr->add_option("--M", M, "Boundary index")->capture_default_str();
  wr->add_option("--m", test_level, "Test level (>= M+1)")->capture_default_str();
  wr->callback([&] {
    action = [&] {
      Output o;
      auto u = ctx.fn(u_spec);
      if (!u.solution) throw Error(ErrorCode::spec, "weak residuals need an exactly representable u");
      auto f = ctx.fn(f_spec);
      record r = ctx.base("weak-residual");
      r["M"] = M;
      r["m"] = test_level;
      r["residual"] = weak_residual(*u.solution, *f.sampler, M, test_level).str();
      o.summary = std::move(r);
      return o;
    };
  });

  // neumann-derivative
  std::string p_text;
  std::optional<int> M_opt;
  int nd_mmax = -1;
  auto* nd = command("neumann-derivative", "Neumann derivative du(p)");
  nd->add_option("--u", u_spec, "Function spec")->required();
  nd->add_option("--p", p_text, "Boundary point")->required();
  nd->add_option("--M", M_opt, "Boundary index (default: kappa of p)");
  nd->add_option("--mmax", nd_mmax, "Last level of the reported sequence");
  nd->callback([&] {
    action = [&] {
      Output o;
      auto u = ctx.fn(u_spec);
      const auto p = ctx.point(p_text);
      const int bm = M_opt.value_or(kappa(p));
      const int top = nd_mmax >= 0 ? nd_mmax : bm + 6;
      auto d = u.solution ? neumann_derivative(*u.solution, p, bm, top)
                          : neumann_derivative(*u.sampler, p, bm, top);
      for (const auto& t : d.sequence) {
        record r = ctx.base("neumann-derivative");
        r["point"] = d.point;
        r["m"] = t.m;
        r["value"] = t.value.str();
        o.rows.push_back(std::move(r));
      }
      record s = ctx.base("neumann-derivative");
      s["point"] = d.point;
      s["M"] = d.M;
      s["value"] = d.value.str();
      s["exact"] = d.exact;
      s["tail_bound"] = opt_scalar(d.tail_bound);
      o.summary = std::move(s);
      return o;
    };
  });

  // solve-dirichlet / solve-neumann
  std::string data;
  int show_level = 1, check_level = 4;
  auto* sd = command("solve-dirichlet", "Solve Delta u = f with u = zeta on V_0");
  sd->add_option("--f", f_spec, "Source function spec")->required();
  sd->add_option("--zeta", data, "Boundary values: comma list or JSON array")->required();
  sd->add_option("--level", show_level, "Report u on V_level")->capture_default_str();
  sd->add_option("--check-level", check_level, "Last level of the residual check")->capture_default_str();
  sd->callback([&] {
    action = [&] {
      Output o;
      auto f = ctx.fn(f_spec);
      auto sol = solve_dirichlet(f.sampler, parse_values(data, ctx.arith), check_level);
      for (const auto& p : vertex_set(show_level, ctx.alphabet)) {
        record r = ctx.base("solve-dirichlet");
        r["point"] = p.str();
        r["value"] = sol.u.value(p).str();
        o.rows.push_back(std::move(r));
      }
      record s = ctx.base("solve-dirichlet");
      s["u"] = record::parse(
          nlohmann::json{{"kind", "solution"}, {"harmonic", cylinder_json(sol.u.harmonic())}, {"f", f.canonical}}
              .dump());
      s["boundary_defect"] = sol.boundary_defect.str();
      s["residuals"] = residual_array(sol.estimate);
      s["exact"] = sol.estimate.exact;
      o.summary = std::move(s);
      return o;
    };
  });

  auto* sn = command("solve-neumann", "Solve Delta u = f with du = xi on V_0");
  sn->add_option("--f", f_spec, "Source function spec")->required();
  sn->add_option("--xi", data, "Neumann data: comma list or JSON array")->required();
  sn->add_option("--level", show_level, "Report u on V_level")->capture_default_str();
  sn->add_option("--check-level", check_level, "Last level of the residual check")->capture_default_str();
  sn->callback([&] {
    action = [&] {
      Output o;
      auto f = ctx.fn(f_spec);
      try {
        auto sol = solve_neumann(f.sampler, parse_values(data, ctx.arith), check_level);
        for (const auto& p : vertex_set(show_level, ctx.alphabet)) {
          record r = ctx.base("solve-neumann");
          r["point"] = p.str();
          r["value"] = sol.u.value(p).str();
          o.rows.push_back(std::move(r));
        }
        record s = ctx.base("solve-neumann");
        s["status"] = "ok";
        s["u"] = record::parse(nlohmann::json{{"kind", "green"}, {"f", f.canonical}}.dump());
        s["derivatives"] = scalars(sol.derivatives);
        s["residuals"] = residual_array(sol.estimate);
        s["exact"] = sol.estimate.exact;
        o.summary = std::move(s);
      } catch (const IncompatibleError& e) {
        record s = ctx.base("solve-neumann");
        s["status"] = "incompatible";
        s["error"] = std::string(error_name(e.code()));
        s["message"] = e.what();
        s["defect"] = scalars(e.defect());
        o.rows.clear();
        o.summary = std::move(s);
        o.exit = kIncompatible;
      }
      return o;
    };
  });

  // gauss-green
  std::string v_spec;
  auto* gg = command("gauss-green", "Check the Gauss-Green formula on boundary V_M");
  gg->add_option("--u", u_spec, "First function spec")->required();
  gg->add_option("--v", v_spec, "Second function spec")->required();
  gg->add_option("--M", M, "Boundary index")->capture_default_str();
  gg->callback([&] {
    action = [&] {
      Output o;
      auto u = ctx.fn(u_spec);
      auto v = ctx.fn(v_spec);
      if (!u.solution || !v.solution)
        throw Error(ErrorCode::spec, "Gauss-Green needs constant, cylinder, green or solution specs");
      auto rep = gauss_green_check(*u.solution, *v.solution, M);
      record s = ctx.base("gauss-green");
      s["M"] = M;
      s["lhs"] = rep.lhs.str();
      s["rhs"] = rep.rhs.str();
      s["residual"] = rep.residual.str();
      s["conservation_u"] = rep.conservation_u.str();
      s["conservation_v"] = rep.conservation_v.str();
      s["energy_identity"] = opt_scalar(rep.energy_identity);
      o.summary = std::move(s);
      return o;
    };
  });

  // dirichlet
  int level = 1;
  std::string algorithm = "both";
  auto* df = command("dirichlet", "Dirichlet form E_{H_m}(u, v)");
  df->add_option("--u", u_spec, "First function spec")->required();
  df->add_option("--v", v_spec, "Second function spec (default: u)");
  df->add_option("--m", level, "Level")->capture_default_str();
  df->add_option("--algorithm", algorithm, "operator-form, difference-form or both")
      ->check(CLI::IsMember({"operator-form", "difference-form", "both"}))
      ->capture_default_str();
  df->callback([&] {
    action = [&] {
      Output o;
      auto u = ctx.fn(u_spec);
      auto v = v_spec.empty() ? u : ctx.fn(v_spec);
      const auto ur = restrict(*u.sampler, level);
      const auto vr = restrict(*v.sampler, level);
      std::vector<FormAlgorithm> algs;
      if (algorithm != "difference-form") algs.push_back(FormAlgorithm::operator_form);
      if (algorithm != "operator-form") algs.push_back(FormAlgorithm::difference_form);
      for (auto alg : algs) {
        auto rep = dirichlet_form(level, ur, vr, alg);
        record r = ctx.base("dirichlet");
        r["m"] = rep.m;
        r["value"] = rep.value.str();
        r["algorithm"] = std::string(algorithm_name(rep.algorithm));
        o.rows.push_back(std::move(r));
      }
      return o;
    };
  });

  // energy
  auto* en = command("energy", "Energy sequence E_{H_m}(u|V_m)");
  en->add_option("--u", u_spec, "Function spec")->required();
  en->add_option("--mmax", mmax, "Largest level")->capture_default_str();
  en->callback([&] {
    action = [&] {
      Output o;
      auto u = ctx.fn(u_spec);
      auto seq = energy_sequence(*u.sampler, mmax);
      for (std::size_t i = 0; i < seq.entries.size(); ++i) {
        record r = ctx.base("energy");
        r["m"] = seq.entries[i].m;
        r["value"] = seq.entries[i].value.str();
        r["tail_gap"] = seq.tail_gaps[i].str();
        o.rows.push_back(std::move(r));
      }
      record s = ctx.base("energy");
      s["monotone"] = seq.monotone;
      s["limit_estimate"] = seq.limit_estimate.str();
      o.summary = std::move(s);
      return o;
    };
  });

  // harmonic
  auto* hc = command("harmonic", "Classify u|V_m as harmonic with boundary V_M");
  hc->add_option("--u", u_spec, "Function spec")->required();
  hc->add_option("--M", M, "Boundary index")->capture_default_str();
  hc->add_option("--m", level, "Level of the restriction")->capture_default_str();
  hc->callback([&] {
    action = [&] {
      Output o;
      auto u = ctx.fn(u_spec);
      auto verdict = classify_harmonic(restrict(*u.sampler, level), M);
      record s = ctx.base("harmonic");
      s["M"] = M;
      s["m"] = level;
      s["compatible"] = verdict.compatible;
      if (verdict.witness)
        s["witness"] = record::parse(cylinder_json(*verdict.witness).dump());
      if (verdict.violation)
        s["violation"] = {{"level", verdict.violation->level},
                          {"point", verdict.violation->point},
                          {"residual", verdict.violation->residual.str()}};
      o.summary = std::move(s);
      return o;
    };
  });

  // verify
  int verify_mmax = 4, samples = 6;
  auto* vf = command("verify", "Run the randomized identity suite");
  vf->add_option("--mmax", verify_mmax, "Largest level")->capture_default_str();
  vf->add_option("--samples", samples, "Random instances per check and level")->capture_default_str();
  vf->callback([&] {
    action = [&] {
      Output o;
      auto rep = run_verification({cfg.n, verify_mmax, cfg.seed, ctx.arith, samples});
      int passed = 0;
      for (const auto& c : rep.checks) {
        record r = ctx.base("verify");
        r["check"] = c.name;
        r["passed"] = c.passed;
        r["cases"] = c.cases;
        r["detail"] = c.detail;
        o.rows.push_back(std::move(r));
        passed += c.passed ? 1 : 0;
      }
      record s = ctx.base("verify");
      s["mmax"] = verify_mmax;
      s["checks"] = rep.checks.size();
      s["passed"] = passed;
      s["ok"] = rep.passed();
      o.summary = std::move(s);
      o.exit = rep.passed() ? kOk : kVerificationFailed;
      return o;
    };
  });

  try {
    std::vector<std::string> args = apply_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "UsageError: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << error_name(e.code()) << ": " << e.what() << '\n';
    return exit_for(e.code());
  }

  try {
    ctx.arith = parse_arith(cfg.mode);
    cfg.mode = std::string(arith_name(ctx.arith));
    ctx.alphabet = Alphabet(cfg.n, cfg.point_cap);
    const bool csv = cfg.csv || cfg.format == "csv";
    Output o = action();
    emit(o, csv, out);
    return o.exit;
  } catch (const Error& e) {
    err << error_name(e.code()) << ": " << e.what() << '\n';
    return exit_for(e.code());
  } catch (const std::exception& e) {
    err << "Error: " << e.what() << '\n';
    return kDomain;
  }
}

}  // namespace shiftlap::cli

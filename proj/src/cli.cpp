#include "torus_rh/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "torus_rh/report_io.hpp"
#include "torus_rh/verifier.hpp"

namespace torus_rh::cli {

namespace {

struct Config {
  double a = 1.0;
  double c = 2.0;
  double lambda = 0.0;
  unsigned seed = 7;
  std::string format = "json";
  std::string out_path;
  std::vector<std::string> tol;
};

// Usage problems found after CLI11 has parsed.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Tolerances parse_tolerances(const std::vector<std::string>& items) {
  Tolerances t;
  for (const std::string& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--tol expects KEY=VAL, got " + item);
    double v = 0.0;
    try {
      v = parse_double(item.substr(eq + 1));
    } catch (const Error&) {
      throw UsageError("--tol value is not a number: " + item);
    }
    try {
      t.set(item.substr(0, eq), v);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  return t;
}

GapSpec make_gap(const Config& cfg) {
  try {
    return GapSpec(cfg.a, cfg.c);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

void emit(const Config& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out_path);
  if (!f) throw std::runtime_error("cannot open output file " + cfg.out_path);
  f << text;
  if (!f) throw std::runtime_error("write failed for " + cfg.out_path);
}

std::string render(const Config& cfg, const Table& t) { return cfg.format == "csv" ? table_csv(t) : table_json(t); }

double token_part(const std::string& s) {
  if (s == "0+" || s == "0-") return 0.0;
  return parse_double(s);
}

int cmd_periods(const Config& cfg, std::ostream& out) {
  const GapSpec g = make_gap(cfg);
  const TorusPeriods p = compute_periods(g);
  Table t;
  t.columns = {"a", "c", "gamma_re", "gamma_im", "tau_re", "tau_im", "gamma_error", "tau_error"};
  t.rows.push_back({g.a(), g.c(), p.gamma.real(), p.gamma.imag(), p.tau.real(), p.tau.imag(), p.gamma_error,
                    p.tau_error});
  if (cfg.format == "csv") {
    emit(cfg, table_csv(t), out);
  } else {
    nlohmann::json j = nlohmann::json::parse(table_json(t)).at(0);
    emit(cfg, j.dump(2) + "\n", out);
  }
  return exit_pass;
}

void push_complex(std::vector<Cell>& row, cplx v) {
  row.emplace_back(v.real());
  row.emplace_back(v.imag());
}

int cmd_eval(const Config& cfg, const std::string& target, const std::vector<std::string>& points, bool allow_near,
             std::ostream& out, std::ostream& err) {
  const GapSpec g = make_gap(cfg);
  const PhaseParam lam(cfg.lambda);
  if (target == "M3" && lam.is_integer()) {
    err << "error: M3 undefined for Λ̃ ∈ ℤ\n";
    return exit_domain;
  }
  if (points.empty()) throw UsageError("eval needs at least one --points value");

  const auto ctx = std::make_shared<const SurfaceContext>(g);
  const ModelSolutions ms(ctx, lam);
  const bool matrix = target == "M1" || target == "M2" || target == "M3";
  const bool scalar = target == "Es" || target == "Ea" || target == "EaHat" || target == "abel";

  Table t;
  t.columns = {"input", "target"};
  const std::vector<std::string> value_cols =
      matrix ? std::vector<std::string>{"m11", "m12", "m21", "m22"}
             : scalar ? std::vector<std::string>{"value"} : std::vector<std::string>{"m1", "m2"};
  for (const std::string& v : value_cols) {
    t.columns.push_back(v + "_re");
    t.columns.push_back(v + "_im");
  }
  t.columns.push_back("flags");

  auto scalar_at = [&](cplx z) -> cplx {
    if (target == "abel") return z;
    const QuasiFn& e = target == "Es" ? ms.e_s() : target == "Ea" ? ms.e_a() : ms.e_a_hat();
    return e(z);
  };

  for (const std::string& text : points) {
    PointLiteral lit;
    try {
      lit = parse_point(text);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    std::vector<Cell> row{text, target};
    std::string flags;
    std::vector<cplx> values;
    if (const auto* inf = std::get_if<InfinityPoint>(&lit)) {
      if (!scalar) throw Error(ErrorKind::invalid_argument, "infinity is accepted only by abel and E targets");
      values.push_back(scalar_at(ctx->abel().raw(*inf)));
    } else {
      KPoint kp;
      if (const auto* b = std::get_if<BoundaryPoint>(&lit)) {
        kp = *b;
      } else {
        const cplx k = std::get<cplx>(lit);
        if (on_contour(k, g)) {
          throw Error(ErrorKind::path_violation, "point on [ic,-ic] needs a side: write 0+,y or 0-,y");
        }
        kp = k;
      }
      const cplx k = base_of(kp);
      if (distance_to_branch_points(k, g) < 1e-3 * g.c()) flags = "near_singular";
      try {
        const PreparedPoint p = ctx->prepare(kp);
        if (target == "m") {
          const Vec2 v = ms.m(p);
          values.assign(v.begin(), v.end());
        } else if (matrix) {
          const Mat2 M = target == "M1" ? ms.m1(p) : target == "M2" ? ms.m2(p) : ms.m3(p);
          values = {M[0][0], M[0][1], M[1][0], M[1][1]};
        } else {
          values.push_back(scalar_at(p.abel));
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::singular_set_eval || !allow_near) throw;
        flags = "singular";
        const double nan = std::numeric_limits<double>::quiet_NaN();
        values.assign(value_cols.size(), cplx(nan, nan));
      }
    }
    for (cplx v : values) push_complex(row, v);
    row.emplace_back(flags);
    t.rows.push_back(std::move(row));
  }
  emit(cfg, render(cfg, t), out);
  return exit_pass;
}

int cmd_verify(const Config& cfg, int contour_points, bool corruption, std::ostream& out, std::ostream& err) {
  const GapSpec g = make_gap(cfg);
  SuiteOptions opt;
  opt.tol = parse_tolerances(cfg.tol);
  opt.contour_points = contour_points;
  opt.include_corruption = corruption;
  const std::vector<ResidualReport> reports = full_suite(g, PhaseParam(cfg.lambda), cfg.seed, opt);
  emit(cfg, cfg.format == "csv" ? reports_csv(reports) : reports_json(reports), out);
  std::size_t failed = 0;
  bool internal = false;
  for (const ResidualReport& r : reports) {
    for (const auto& [k, v] : r.metadata) {
      if (k == "error_kind" && std::get<std::string>(v) == "internal") internal = true;
    }
    if (!r.pass) {
      ++failed;
      err << "FAIL " << r.identity_name << " max_residual=" << format_double(r.max_residual)
          << " tolerance=" << format_double(r.tolerance) << '\n';
    }
  }
  err << reports.size() << " reports, " << failed << " failed\n";
  if (internal) return exit_internal;
  return failed == 0 ? exit_pass : exit_usage;
}

int cmd_scan(const Config& cfg, int count, double from, double to, int contour_points, std::ostream& out) {
  if (count < 2) throw UsageError("scan needs --count >= 2");
  if (!(to > from)) throw UsageError("scan needs --to > --from");
  const GapSpec g = make_gap(cfg);
  const auto ctx = std::make_shared<const SurfaceContext>(g);
  const PreparedPlan plan = prepare_plan(*ctx, make_contour_plan(g, contour_points, cfg.seed));
  const PreparedPoint probe = ctx->prepare(cplx(0.7 * g.c(), 0.9 * g.c()));

  Table t;
  t.columns = {"lambda_tilde", "Ns_inf_re", "Ns_inf_im", "Na_inf_re", "Na_inf_im", "abs_Na_inf",
               "detM1_re",     "detM1_im",  "detM2_re",  "detM2_im",  "detM2_residual", "max_jump_residual",
               "flags"};
  for (int i = 0; i < count; ++i) {
    const double lam_v = from + (to - from) * static_cast<double>(i) / static_cast<double>(count - 1);
    const PhaseParam lam(lam_v);
    const ModelSolutions ms(ctx, lam);
    const cplx S = ms.n_infinity(NKind::sym);
    const cplx T = ms.n_infinity(NKind::anti);
    const cplx d1 = det(ms.m1(probe));
    const cplx d2 = det(ms.m2(probe));
    double jump = 0.0;
    for (const FieldSpec& f : solution_fields(ms)) {
      if (f.name == "witness") continue;
      jump = std::max(jump, certify_jump(f, plan, g, lam, 1.0).max_residual);
    }
    std::string flags;
    if (lam.is_integer()) flags = "integer_phase:M3_undefined";
    if (lam.is_half_integer()) flags = "half_integer_phase:detM1_vanishes";
    std::vector<Cell> row{lam_v};
    push_complex(row, S);
    push_complex(row, T);
    row.emplace_back(std::abs(T));
    push_complex(row, d1);
    push_complex(row, d2);
    row.emplace_back(std::abs(d2 + 2.0 * S * T) / std::max(1.0, std::abs(2.0 * S * T)));
    row.emplace_back(jump);
    row.emplace_back(flags);
    t.rows.push_back(std::move(row));
  }
  emit(cfg, render(cfg, t), out);
  return exit_pass;
}

}  // namespace

PointLiteral parse_point(const std::string& text) {
  if (text == "inf+") return InfinityPoint{Sheet::upper};
  if (text == "inf-") return InfinityPoint{Sheet::lower};
  if (text == "0+") return BoundaryPoint{0.0, Side::plus};
  if (text == "0-") return BoundaryPoint{0.0, Side::minus};
  const auto comma = text.find(',');
  if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos) {
    throw Error(ErrorKind::invalid_argument, "complex literal must be re,im: " + text);
  }
  const std::string re = text.substr(0, comma);
  const std::string im = text.substr(comma + 1);
  if (im == "0+" || im == "0-") throw Error(ErrorKind::invalid_argument, "side tokens go in the real part: " + text);
  double x = 0.0;
  double y = 0.0;
  try {
    x = token_part(re);
    y = token_part(im);
  } catch (const Error&) {
    throw Error(ErrorKind::invalid_argument, "complex literal must be re,im: " + text);
  }
  if (!std::isfinite(x) || !std::isfinite(y)) throw Error(ErrorKind::invalid_argument, "point must be finite: " + text);
  if (re == "0+") return BoundaryPoint{cplx(0.0, y), Side::plus};
  if (re == "0-") return BoundaryPoint{cplx(0.0, y), Side::minus};
  return cplx(x, y);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"One-gap model RH problem: periods, evaluation, verification and phase scans", "torus-rh"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  Config cfg;
  app.add_option("--a", cfg.a, "inner branch point ia")->capture_default_str();
  app.add_option("--c", cfg.c, "outer branch point ic")->capture_default_str();
  app.add_option("--lambda", cfg.lambda, "phase lambda_tilde")->capture_default_str();
  app.add_option("--seed", cfg.seed, "sampling seed")->capture_default_str();
  app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--out", cfg.out_path, "output file (default stdout)");
  app.add_option("--tol", cfg.tol, "tolerance override KEY=VAL")->take_all();

  auto* periods = app.add_subcommand("periods", "Gamma and tau with error estimates");

  auto* eval = app.add_subcommand("eval", "evaluate a solution at points");
  std::string target;
  std::vector<std::string> points;
  bool allow_near = false;
  eval->add_option("--target", target, "what to evaluate")
      ->required()
      ->check(CLI::IsMember({"m", "M1", "M2", "M3", "Es", "Ea", "EaHat", "abel"}));
  eval->add_option("--points", points, "points as re,im (tokens inf+ inf- 0+ 0-)");
  eval->add_flag("--allow-near-singular", allow_near, "flag singular points instead of failing");

  auto* verify = app.add_subcommand("verify", "run the verification suite");
  int contour_points = 200;
  bool no_corruption = false;
  verify->add_option("--contour-points", contour_points, "contour samples")->check(CLI::PositiveNumber);
  verify->add_flag("--no-corruption", no_corruption, "skip the corruption sweep");

  auto* scan = app.add_subcommand("scan", "sweep lambda_tilde on a linear grid");
  int count = 101;
  double from = 0.0;
  double to = 1.0;
  int scan_points = 50;
  scan->add_option("--count", count, "grid size (endpoints included)")->capture_default_str();
  scan->add_option("--from", from, "first grid value")->capture_default_str();
  scan->add_option("--to", to, "last grid value")->capture_default_str();
  scan->add_option("--contour-points", scan_points, "contour samples per row")->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_pass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << "run with --help for usage\n";
    return exit_usage;
  }

  try {
    if (!cfg.tol.empty() && !verify->parsed()) (void)parse_tolerances(cfg.tol);
    if (periods->parsed()) return cmd_periods(cfg, out);
    if (eval->parsed()) return cmd_eval(cfg, target, points, allow_near, out, err);
    if (verify->parsed()) return cmd_verify(cfg, contour_points, !no_corruption, out, err);
    if (scan->parsed()) return cmd_scan(cfg, count, from, to, scan_points, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return exit_usage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_domain;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return exit_internal;
  }
  err << "usage error: no subcommand\n";
  return exit_usage;
}

}  // namespace torus_rh::cli

#include "commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>

#include "dirzero/contraction.hpp"
#include "dirzero/divisor.hpp"
#include "dirzero/embedding.hpp"
#include "dirzero/error.hpp"
#include "dirzero/serialization.hpp"
#include "dirzero/verifier.hpp"

namespace dirzero::cli {

namespace {

struct ConstructOptions {
  std::string seq;
  std::string out;
  std::string config;
  std::string target;
  std::string space = "h2";
  std::string alpha = "1";
  double R = 5.0;
  double gamma = 0.6;
  double rho_target = 0.5;
  double eps_stop = 1e-6;
  double eps_vanish = 1e-3;
  double eps_interp = 1e-3;
  double quad_h = 0.05;
  std::uint64_t seed = 1;
  std::size_t N_start = 16;
  std::size_t N_cap = 1024;
};

struct VerifyOptions {
  std::string poly;
  std::string seq;
  std::string box;
  std::string out;
  std::string zeros_csv;
  double radius = 1e-2;
  double eps = 1e-3;
  double tol = 1e-12;
  double resolution = 1e-4;
};

struct EmbedOptions {
  double alpha = 0.0;
  std::string poly;
  int random = 0;
  std::uint64_t seed = 1;
  int max_len = 8;
  std::size_t cap = 1000000;
  std::string out;
};

struct ConditionsOptions {
  std::string seq;
  double beta = 0.5;
  double cone_t0 = 0.0;
  double cone_c = 1.0;
  std::optional<double> p;
  std::string out;
};

struct AsymptoticsOptions {
  std::string alpha = "1";
  std::vector<std::uint64_t> M{1000000, 2000000};
  std::string out;
};

SpaceWeight parse_weight(const std::string& a) {
  if (a == "inf") return SpaceWeight::infinite();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(a, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != a.size()) throw Error(ErrorCode::InvalidArgument, "alpha must be a number or inf");
  return SpaceWeight::finite(v);
}

void emit(const json& j, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << j.dump(2) << '\n';
  } else {
    write_json_file(path, j);
  }
}

// Either a stored density or {"exponential": {"rate", "span", "step"}}, the density
// e^{-rate x} on [0, span] whose transform is (1 - e^{-(s - 1/2 + rate) span}) / (s - 1/2 + rate).
GridFunction read_target(const std::string& path) {
  const json j = read_json_file(path);
  if (!j.contains("exponential")) return grid_function_from_json(j);
  const json& e = j["exponential"];
  const double rate = e.value("rate", 1.0);
  const double span = e.value("span", 8.0);
  const double step = e.value("step", 0.02);
  if (!(rate > 0.0 && span > 0.0 && step > 0.0 && step <= span)) {
    throw Error(ErrorCode::InvalidArgument, "exponential target needs positive rate, span, step");
  }
  const auto cells = static_cast<std::size_t>(std::llround(span / step));
  std::vector<double> br(cells + 1);
  std::vector<Complex> vals(cells);
  for (std::size_t k = 0; k <= cells; ++k) br[k] = span * double(k) / double(cells);
  for (std::size_t k = 0; k < cells; ++k) {
    const double a = br[k], b = br[k + 1];
    vals[k] = (std::exp(-rate * a) - std::exp(-rate * b)) / (rate * (b - a));
  }
  return GridFunction(std::move(br), std::move(vals));
}

int cmd_construct(const ConstructOptions& o, bool require_target, std::ostream& out) {
  ConstructionConfig cfg;
  cfg.R = o.R;
  cfg.gamma = o.gamma;
  cfg.rho_target = o.rho_target;
  cfg.eps_stop = o.eps_stop;
  cfg.eps_vanish = o.eps_vanish;
  cfg.eps_interp = o.eps_interp;
  cfg.quad_h = o.quad_h;
  cfg.seed = o.seed;
  cfg.N_start = o.N_start;
  cfg.N_cap = o.N_cap;
  if (o.space == "dalpha") {
    cfg.mode = SpaceMode::dalpha(parse_weight(o.alpha));
  } else if (o.space != "h2") {
    throw Error(ErrorCode::InvalidArgument, "space must be h2 or dalpha");
  }
  if (!o.config.empty()) apply_config_json(read_json_file(o.config), cfg);
  if (require_target && o.target.empty()) {
    throw Error(ErrorCode::InvalidArgument, "interpolate needs --target");
  }

  const PointSequence S = sequence_from_json(read_json_file(o.seq));
  ConstructionResult res = o.target.empty()
                               ? construct_vanishing(S, cfg)
                               : interpolate_on_sequence(S, read_target(o.target), cfg);

  const std::filesystem::path dir(o.out);
  write_json_file(dir / "F.json", polynomial_to_json(res.F));
  json cert = certificate_to_json(res.cert);
  cert["config"] = config_to_json(cfg);
  write_json_file(dir / "certificate.json", cert);
  out << "N = " << res.cert.N << ", rho = " << res.cert.rho_hat
      << ", iterations = " << res.cert.records.size()
      << ", residual = " << res.cert.max_residual << ", certified = "
      << (res.cert.certified ? "yes" : "no") << '\n';
  return res.cert.certified ? kExitOk : kExitCheckFailed;
}

Box parse_box(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw Error(ErrorCode::InvalidArgument, "box entries must be numbers: " + text);
    }
    v.push_back(x);
  }
  if (v.size() != 4) throw Error(ErrorCode::InvalidArgument, "box is sigma_lo,sigma_hi,t_lo,t_hi");
  Box b{v[0], v[1], v[2], v[3]};
  b.validate();
  return b;
}

int cmd_verify(const VerifyOptions& o, std::ostream& out) {
  std::optional<Box> box;
  if (!o.box.empty()) box = parse_box(o.box);
  const DirichletPolynomial F = polynomial_from_json(read_json_file(o.poly));
  PointSequence S;
  if (!o.seq.empty()) S = sequence_from_json(read_json_file(o.seq));

  const double norm = norm_h2(F);
  bool ok = true;
  json points = json::array();
  double max_rel = 0.0;
  for (const auto& p : S.points()) {
    double r = 0.0;
    for (int k = 0; k < p.multiplicity; ++k) r = std::max(r, std::abs(F.derivative(p.point(), k)));
    const double rel = norm > 0.0 ? r / norm : (r > 0.0 ? INFINITY : 0.0);
    max_rel = std::max(max_rel, rel);
    int count = -1;
    std::string note;
    try {
      count = count_zeros(F, p.point(), o.radius, o.tol);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BoundaryTooClose) throw;
      note = "zero on the circle";
    }
    const bool residual_ok = rel <= o.eps;
    const bool count_ok = count >= p.multiplicity;
    ok = ok && residual_ok && count_ok;
    json entry = {{"sigma", p.sigma},
                  {"t", p.t},
                  {"multiplicity", p.multiplicity},
                  {"residual", r},
                  {"relative_residual", rel},
                  {"residual_ok", residual_ok},
                  {"winding_count", count},
                  {"count_ok", count_ok}};
    if (!note.empty()) entry["note"] = note;
    points.push_back(entry);
  }

  json report = {{"F_norm", norm},
                 {"F_at_three_halves", std::abs(F(Complex{1.5, 0.0}))},
                 {"length", F.length()},
                 {"eps", o.eps},
                 {"radius", o.radius},
                 {"max_relative_residual", max_rel},
                 {"points", points}};
  if (box) {
    const NecessityReport nr = necessity_check(F, *box, o.resolution, o.tol);
    json zs = json::array();
    for (const auto& z : nr.zeros) {
      zs.push_back({{"sigma", z.sigma}, {"t", z.t}, {"multiplicity", z.multiplicity}});
    }
    report["box"] = {{"zeros", zs},
                     {"blaschke_sum", nr.blaschke_sum},
                     {"box_height", nr.box_height}};
    if (!o.zeros_csv.empty()) {
      std::ofstream csv(o.zeros_csv);
      if (!csv) throw Error(ErrorCode::InvalidArgument, "cannot write " + o.zeros_csv);
      write_zero_csv(csv, nr.zeros);
    }
  }
  report["ok"] = ok;
  emit(report, o.out, out);
  return ok ? kExitOk : kExitCheckFailed;
}

DirichletPolynomial random_polynomial(std::mt19937_64& rng, int max_len) {
  std::uniform_int_distribution<int> len(1, max_len);
  std::normal_distribution<double> g;
  std::vector<Complex> c(static_cast<std::size_t>(len(rng)));
  for (auto& a : c) {
    const double re = g(rng);
    a = {re, g(rng)};
  }
  return DirichletPolynomial(std::move(c));
}

int cmd_embed(const EmbedOptions& o, std::ostream& out) {
  if (!(o.alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be positive");
  json report = {{"alpha", o.alpha}, {"exponent", embedding_exponent(o.alpha)}};
  std::vector<DirichletPolynomial> polys;
  if (!o.poly.empty()) polys.push_back(polynomial_from_json(read_json_file(o.poly)));
  if (o.random > 0) {
    if (o.max_len < 1) throw Error(ErrorCode::InvalidArgument, "max-len must be positive");
    std::mt19937_64 rng(o.seed);
    for (int k = 0; k < o.random; ++k) polys.push_back(random_polynomial(rng, o.max_len));
    report["seed"] = o.seed;
  }
  const bool integral = o.alpha == std::floor(o.alpha);
  int violations = 0;
  if (integral) {
    json checks = json::array();
    for (const auto& p : polys) {
      const auto c = verify_contractive_embedding(p, static_cast<int>(o.alpha), o.cap);
      if (!c.ok) ++violations;
      checks.push_back({{"length", p.length()}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"ok", c.ok}});
    }
    report["checks"] = checks;
  } else if (!polys.empty()) {
    report["note"] = "norm comparison runs for integer alpha only";
  }
  report["violations"] = violations;
  emit(report, o.out, out);
  return violations == 0 ? kExitOk : kExitCheckFailed;
}

json condition_json(const ConditionReport& r) {
  return {{"sum", r.sum}, {"satisfied", r.satisfied}, {"late_share", r.late_share}};
}

int cmd_conditions(const ConditionsOptions& o, std::ostream& out) {
  const PointSequence S = sequence_from_json(read_json_file(o.seq));
  json report = {{"points", S.size()},
                 {"blaschke", condition_json(blaschke_condition(S))},
                 {"carleson", condition_json(carleson_condition(S, o.beta))},
                 {"beta", o.beta},
                 {"cone", cone_condition(S, o.cone_t0, o.cone_c)}};
  try {
    report["shapiro_shields"] = condition_json(shapiro_shields_condition(S));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::LogSingular) throw;
    report["shapiro_shields"] = {{"error", e.what()}};
  }
  if (o.p) {
    const auto hp = zero_criterion_for_hp(S, *o.p, o.cone_t0, o.cone_c);
    report["hp"] = {{"p", *o.p},
                    {"beta_needed", hp.beta_needed},
                    {"carleson_sum", hp.carleson_sum},
                    {"certified", hp.certified},
                    {"route", hp.route}};
  }
  emit(report, o.out, out);
  return kExitOk;
}

int cmd_asymptotics(const AsymptoticsOptions& o, std::ostream& out) {
  const SpaceWeight w = parse_weight(o.alpha);
  if (o.M.empty()) throw Error(ErrorCode::InvalidArgument, "need at least one M");
  const std::uint64_t top = *std::max_element(o.M.begin(), o.M.end());
  if (top < 2 || top > 200000000ULL) throw Error(ErrorCode::IndexOverflow, "M out of range");
  const DivisorTable d(top);
  json rows = json::array();
  double prev = 0.0;
  for (std::size_t k = 0; k < o.M.size(); ++k) {
    const auto a = divisor_sum_asymptotic(w, o.M[k], d);
    json row = {{"M", o.M[k]},
                {"partial_sum", static_cast<double>(a.partial_sum)},
                {"normalized_ratio", a.normalized_ratio}};
    if (k > 0 && prev != 0.0) row["relative_change"] = std::abs(a.normalized_ratio - prev) / prev;
    prev = a.normalized_ratio;
    rows.push_back(row);
  }
  emit({{"alpha", o.alpha}, {"rows", rows}}, o.out, out);
  return kExitOk;
}

void add_construct_options(CLI::App* c, ConstructOptions& o) {
  c->add_option("--seq", o.seq, "point sequence JSON")->required();
  c->add_option("--out", o.out, "output directory")->required();
  c->add_option("--config", o.config, "config JSON; its keys override flags");
  c->add_option("--space", o.space, "h2 or dalpha")->capture_default_str();
  c->add_option("--alpha", o.alpha, "weight exponent for dalpha (number or inf)")
      ->capture_default_str();
  c->add_option("--R", o.R, "half-height of the working strip")->capture_default_str();
  c->add_option("--gamma", o.gamma, "weighted-grid exponent")->capture_default_str();
  c->add_option("--rho-target", o.rho_target, "contraction target")->capture_default_str();
  c->add_option("--eps-stop", o.eps_stop, "relative step size that ends the iteration")
      ->capture_default_str();
  c->add_option("--eps-vanish", o.eps_vanish, "relative residual bound")->capture_default_str();
  c->add_option("--eps-interp", o.eps_interp, "relative interpolation bound")
      ->capture_default_str();
  c->add_option("--quad-h", o.quad_h, "Cauchy-transform cell size")->capture_default_str();
  c->add_option("--seed", o.seed, "random seed")->capture_default_str();
  c->add_option("--n-start", o.N_start, "first shift tried")->capture_default_str();
  c->add_option("--n-cap", o.N_cap, "largest shift tried")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dirichlet series with prescribed zeros"};
  app.require_subcommand(1);

  ConstructOptions construct, interpolate;
  VerifyOptions verify;
  EmbedOptions embed;
  ConditionsOptions conditions;
  AsymptoticsOptions asymptotics;

  auto* c_construct = app.add_subcommand("construct", "build F vanishing on a sequence");
  add_construct_options(c_construct, construct);
  c_construct->add_option("--target", construct.target, "interpolate this density instead");

  auto* c_interp = app.add_subcommand("interpolate", "build F matching a target on a sequence");
  add_construct_options(c_interp, interpolate);
  c_interp->add_option("--target", interpolate.target, "target density JSON")->required();

  auto* c_verify = app.add_subcommand("verify", "check residuals and count zeros");
  c_verify->add_option("--poly", verify.poly, "coefficient JSON")->required();
  c_verify->add_option("--seq", verify.seq, "point sequence JSON");
  c_verify->add_option("--box", verify.box, "sigma_lo,sigma_hi,t_lo,t_hi for a zero search");
  c_verify->add_option("--radius", verify.radius, "disk radius around each point")
      ->capture_default_str();
  c_verify->add_option("--eps", verify.eps, "relative residual bound")->capture_default_str();
  c_verify->add_option("--tol", verify.tol, "smallest |F| allowed on a contour")
      ->capture_default_str();
  c_verify->add_option("--resolution", verify.resolution, "zero localisation size")
      ->capture_default_str();
  c_verify->add_option("--zeros-csv", verify.zeros_csv, "write located zeros here");
  c_verify->add_option("--out", verify.out, "report path (default stdout)");

  auto* c_embed = app.add_subcommand("embed", "compare mean norms with weighted norms");
  c_embed->add_option("--alpha", embed.alpha, "weight exponent")->required();
  c_embed->add_option("--poly", embed.poly, "coefficient JSON");
  c_embed->add_option("--random", embed.random, "number of random polynomials");
  c_embed->add_option("--seed", embed.seed, "random seed")->capture_default_str();
  c_embed->add_option("--max-len", embed.max_len, "largest random length")->capture_default_str();
  c_embed->add_option("--cap", embed.cap, "largest convolution length")->capture_default_str();
  c_embed->add_option("--out", embed.out, "report path (default stdout)");

  auto* c_cond = app.add_subcommand("conditions", "summability and cone checks for a sequence");
  c_cond->add_option("--seq", conditions.seq, "point sequence JSON")->required();
  c_cond->add_option("--beta", conditions.beta, "Carleson exponent")->capture_default_str();
  c_cond->add_option("--cone-t0", conditions.cone_t0, "cone axis")->capture_default_str();
  c_cond->add_option("--cone-c", conditions.cone_c, "cone slope")->capture_default_str();
  c_cond->add_option("--p", conditions.p, "also test the mean-norm zero criterion for this p");
  c_cond->add_option("--out", conditions.out, "report path (default stdout)");

  auto* c_asym = app.add_subcommand("asymptotics", "normalized partial sums of d(n)^-alpha");
  c_asym->add_option("--alpha", asymptotics.alpha, "weight exponent (number or inf)")
      ->capture_default_str();
  c_asym->add_option("--M", asymptotics.M, "cut-offs")->capture_default_str();
  c_asym->add_option("--out", asymptotics.out, "report path (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitInvalid;
  }

  try {
    if (c_construct->parsed()) return cmd_construct(construct, false, out);
    if (c_interp->parsed()) return cmd_construct(interpolate, true, out);
    if (c_verify->parsed()) return cmd_verify(verify, out);
    if (c_embed->parsed()) return cmd_embed(embed, out);
    if (c_cond->parsed()) return cmd_conditions(conditions, out);
    if (c_asym->parsed()) return cmd_asymptotics(asymptotics, out);
  } catch (const Error& e) {
    err << e.what() << '\n';
    if (e.code() == ErrorCode::NoContraction || e.code() == ErrorCode::NontrivialityFailed) {
      return kExitNoConstruction;
    }
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace dirzero::cli

#include "dirzero/serialization.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "dirzero/error.hpp"

namespace dirzero {

namespace {

double number(const json& j, const char* what) {
  if (!j.is_number()) throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be a number");
  return j.get<double>();
}

Complex complex_from(const json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw Error(ErrorCode::InvalidArgument, "complex values are [re, im] pairs");
  }
  return {number(j[0], "re"), number(j[1], "im")};
}

}  // namespace

json polynomial_to_json(const DirichletPolynomial& p) {
  json out = json::array();
  for (const auto& [n, a] : p.terms()) out.push_back({n, a.real(), a.imag()});
  return out;
}

DirichletPolynomial polynomial_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorCode::InvalidArgument, "polynomial must be an array");
  std::vector<DirichletPolynomial::Term> terms;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer()) {
      throw Error(ErrorCode::InvalidArgument, "polynomial terms are [n, re, im]");
    }
    const auto n = e[0].get<long long>();
    if (n < 1 || n > 100000000LL) throw Error(ErrorCode::InvalidArgument, "index out of range");
    terms.emplace_back(static_cast<std::size_t>(n), Complex{number(e[1], "re"), number(e[2], "im")});
  }
  return DirichletPolynomial::from_terms(terms);
}

json sequence_to_json(const PointSequence& S) {
  json out = json::array();
  for (const auto& p : S.points()) {
    out.push_back({{"sigma", p.sigma}, {"t", p.t}, {"multiplicity", p.multiplicity}});
  }
  return out;
}

PointSequence sequence_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorCode::InvalidSequence, "sequence must be an array");
  std::vector<SequencePoint> pts;
  for (const auto& e : j) {
    if (!e.is_object() || !e.contains("sigma") || !e.contains("t")) {
      throw Error(ErrorCode::InvalidSequence, "points need sigma and t");
    }
    SequencePoint p;
    p.sigma = number(e["sigma"], "sigma");
    p.t = number(e["t"], "t");
    if (e.contains("multiplicity")) {
      if (!e["multiplicity"].is_number_integer()) {
        throw Error(ErrorCode::InvalidSequence, "multiplicity must be an integer");
      }
      p.multiplicity = e["multiplicity"].get<int>();
    }
    pts.push_back(p);
  }
  return PointSequence(std::move(pts));
}

json grid_function_to_json(const GridFunction& phi) {
  json vals = json::array();
  for (Complex v : phi.values()) vals.push_back({v.real(), v.imag()});
  return {{"breakpoints", std::vector<double>(phi.breakpoints().begin(), phi.breakpoints().end())},
          {"values", vals}};
}

GridFunction grid_function_from_json(const json& j) {
  if (!j.is_object() || !j.contains("breakpoints") || !j.contains("values")) {
    throw Error(ErrorCode::InvalidArgument, "density needs breakpoints and values");
  }
  std::vector<double> br;
  for (const auto& b : j["breakpoints"]) br.push_back(number(b, "breakpoint"));
  std::vector<Complex> vals;
  for (const auto& v : j["values"]) vals.push_back(complex_from(v));
  return GridFunction(std::move(br), std::move(vals));
}

void apply_config_json(const json& j, ConstructionConfig& cfg) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "config must be an object");
  auto num = [&](const char* key, double& dst) {
    if (j.contains(key)) dst = number(j[key], key);
  };
  auto count = [&](const char* key, auto& dst) {
    if (!j.contains(key)) return;
    if (!j[key].is_number_integer() || j[key].get<long long>() < 0) {
      throw Error(ErrorCode::InvalidArgument, std::string(key) + " must be a non-negative integer");
    }
    dst = static_cast<std::remove_reference_t<decltype(dst)>>(j[key].get<long long>());
  };
  num("R", cfg.R);
  num("gamma", cfg.gamma);
  num("rho_target", cfg.rho_target);
  num("eps_stop", cfg.eps_stop);
  num("eps_vanish", cfg.eps_vanish);
  num("eps_interp", cfg.eps_interp);
  num("quad_h", cfg.quad_h);
  num("ramp_sharpness", cfg.ramp_sharpness);
  num("divisor_threshold", cfg.divisor_threshold);
  num("xi_span", cfg.xi_span);
  num("xi_step", cfg.xi_step);
  num("h_line", cfg.h_line);
  num("t_max", cfg.t_max);
  num("dt_line", cfg.dt_line);
  count("seed", cfg.seed);
  count("N_cap", cfg.N_cap);
  count("N_start", cfg.N_start);
  count("trials", cfg.trials);
  count("power_steps", cfg.power_steps);
  count("max_iterations", cfg.max_iterations);
  if (j.contains("alpha")) {
    const auto& a = j["alpha"];
    if (a.is_string() && a.get<std::string>() == "h2") {
      cfg.mode = SpaceMode::h2();
    } else if (a.is_string() && a.get<std::string>() == "inf") {
      cfg.mode = SpaceMode::dalpha(SpaceWeight::infinite());
    } else {
      cfg.mode = SpaceMode::dalpha(SpaceWeight::finite(number(a, "alpha")));
    }
  }
}

json config_to_json(const ConstructionConfig& cfg) {
  json alpha;
  if (cfg.mode.is_h2()) {
    alpha = "h2";
  } else if (cfg.mode.weight->is_infinite()) {
    alpha = "inf";
  } else {
    alpha = cfg.mode.weight->alpha();
  }
  return {{"R", cfg.R},
          {"gamma", cfg.gamma},
          {"alpha", alpha},
          {"rho_target", cfg.rho_target},
          {"eps_stop", cfg.eps_stop},
          {"eps_vanish", cfg.eps_vanish},
          {"eps_interp", cfg.eps_interp},
          {"quad_h", cfg.quad_h},
          {"ramp_sharpness", cfg.ramp_sharpness},
          {"divisor_threshold", cfg.divisor_threshold},
          {"seed", cfg.seed},
          {"N_cap", cfg.N_cap},
          {"N_start", cfg.N_start},
          {"xi_span", cfg.xi_span},
          {"xi_step", cfg.xi_step},
          {"h_line", cfg.h_line},
          {"t_max", cfg.t_max},
          {"dt_line", cfg.dt_line},
          {"trials", cfg.trials},
          {"power_steps", cfg.power_steps},
          {"max_iterations", cfg.max_iterations}};
}

json certificate_to_json(const IterationCertificate& cert) {
  json recs = json::array();
  for (const auto& r : cert.records) {
    recs.push_back({{"j", r.j},
                    {"F_norm", r.F_norm},
                    {"F_at_three_halves", r.F_at_three_halves},
                    {"density_norm", r.density_norm},
                    {"residual", r.residual},
                    {"inversion_defect", r.inversion_defect},
                    {"mass_below", r.mass_below},
                    {"spill", r.spill}});
  }
  json sweep = json::array();
  for (const auto& [N, rho] : cert.N_sweep) sweep.push_back({{"N", N}, {"rho_hat", rho}});
  return {{"mode", cert.mode},
          {"kind", cert.kind},
          {"N", cert.N},
          {"rho_hat", cert.rho_hat},
          {"N_sweep", sweep},
          {"min_divisor", cert.min_divisor},
          {"first_step_ratio", cert.first_step_ratio},
          {"start_norm", cert.start_norm},
          {"start_norm_projected", cert.start_norm_projected},
          {"records", recs},
          {"F_norm", cert.F_norm},
          {"F_at_three_halves", cert.F_at_three_halves},
          {"head_value", cert.head_value},
          {"tail_sum", cert.tail_sum},
          {"max_residual", cert.max_residual},
          {"max_step_ratio", cert.max_step_ratio},
          {"converged", cert.converged},
          {"nontrivial", cert.nontrivial},
          {"geometric", cert.geometric},
          {"vanishing", cert.vanishing},
          {"certified", cert.certified}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace dirzero

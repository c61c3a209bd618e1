#pragma once

#include <filesystem>
#include <json.hpp>

#include "dirzero/contraction.hpp"
#include "dirzero/dirichlet.hpp"
#include "dirzero/geometry.hpp"
#include "dirzero/laplace.hpp"

namespace dirzero {

using nlohmann::json;

/// Sparse [[n, re, im], ...].
json polynomial_to_json(const DirichletPolynomial& p);
DirichletPolynomial polynomial_from_json(const json& j);

/// [{"sigma": .., "t": .., "multiplicity": ..}, ...]; multiplicity defaults to 1.
json sequence_to_json(const PointSequence& S);
PointSequence sequence_from_json(const json& j);

/// {"breakpoints": [...], "values": [[re, im], ...]}.
json grid_function_to_json(const GridFunction& phi);
GridFunction grid_function_from_json(const json& j);

/// Keys: R, gamma, alpha ("h2", a number or "inf"), rho_target, eps_stop, eps_vanish,
/// eps_interp, quad_h, seed, N_cap, N_start, xi_span, xi_step, h_line, t_max, dt_line,
/// trials, power_steps, max_iterations. Missing keys keep the values already in `cfg`.
void apply_config_json(const json& j, ConstructionConfig& cfg);
json config_to_json(const ConstructionConfig& cfg);

json certificate_to_json(const IterationCertificate& cert);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

}  // namespace dirzero

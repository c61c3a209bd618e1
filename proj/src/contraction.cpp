#include "dirzero/contraction.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "dirzero/error.hpp"

namespace dirzero {

namespace {

// Pole of the asymptotic model subtracted before the line inversion.
constexpr double kModelPole = -2.0;

std::size_t round_count(double x) {
  return static_cast<std::size_t>(std::max(1.0, std::round(x)));
}

double block_norm(std::span<const Complex> integrals, double width) {
  long double acc = 0.0L;
  for (Complex v : integrals) acc += std::norm(v);
  return std::sqrt(static_cast<double>(acc) / width);
}

struct Constraint {
  Complex s;
  int order;
};

std::vector<Constraint> constraints_of(const PointSequence& S) {
  std::vector<Constraint> out;
  for (const auto& p : S.points()) {
    for (int r = 0; r < p.multiplicity; ++r) out.push_back({p.point(), r});
  }
  return out;
}

}  // namespace

ExponentialShift::ExponentialShift(std::size_t N) : N_(N), log_N_(std::log(double(N))) {
  if (N < 2) throw Error(ErrorCode::InvalidArgument, "exponential shift needs N >= 2");
}

std::string SpaceMode::name() const {
  if (!weight) return "h2";
  if (weight->is_infinite()) return "dalpha(inf)";
  std::string a = std::to_string(weight->alpha());
  a.erase(a.find_last_not_of('0') + 1);
  if (!a.empty() && a.back() == '.') a.pop_back();
  return "dalpha(" + a + ")";
}

struct TOperator::Pieces {
  GridFunction phi;
  DirichletPolynomial F;
  std::shared_ptr<CauchyTransform> u;
  Complex m1;
  Complex m2;
};

TOperator::TOperator(PointSequence S, std::size_t N, const ConstructionConfig& cfg)
    : S_(std::move(S)),
      shift_(N),
      cfg_(cfg),
      theta_(cfg.R, cfg.ramp_sharpness),
      B_(S_),
      quad_(AreaQuadrature::over(StripRegion(cfg.R, 2.0), cfg.quad_h)) {
  if (!(cfg.R > 2.0)) throw Error(ErrorCode::InvalidArgument, "R must exceed 2");
  if (!S_.inside(StripRegion(cfg.R - 2.0, 0.5))) {
    throw Error(ErrorCode::SupportViolation, "sequence is not inside Omega(R-2, 1/2)");
  }
  if (!(cfg.xi_span > 0.0) || !(cfg.xi_step > 0.0) || !(cfg.h_line > 0.0) ||
      !(cfg.dt_line > 0.0) || !(cfg.t_max > cfg.R)) {
    throw Error(ErrorCode::InvalidArgument, "bad density or inversion-line parameters");
  }
  constraint_count_ = static_cast<std::size_t>(S_.total_multiplicity());

  active_.assign(quad_.size(), 0);
  dbar_theta_.assign(quad_.size(), Complex{});
  for (std::size_t i = 0; i < quad_.ns(); ++i) {
    for (std::size_t k = 0; k < quad_.nt(); ++k) {
      const Complex w = quad_.node(i, k);
      const Complex d = theta_.dbar(w);
      if (d != Complex{}) {
        active_[quad_.index(i, k)] = 1;
        dbar_theta_[quad_.index(i, k)] = d;
      }
    }
  }

  if (!S_.empty()) {
    // Dense sampling of the ramp set: the sigma band and the two t bands.
    const double step = 0.02;
    const double R = cfg.R;
    for (double sg = 0.5; sg <= 2.5 + 1e-12; sg += step) {
      for (double t = -R; t <= R + 1e-12; t += step) {
        const Complex s{sg, t};
        if (!theta_.gradient_nonzero(s)) continue;
        min_divisor_ = std::min(min_divisor_, std::abs(B_(s)));
      }
    }
    if (min_divisor_ < cfg.divisor_threshold) {
      throw Error(ErrorCode::DivisorTooSmall,
                  "inf |B| on the ramp set is " + std::to_string(min_divisor_));
    }
  }

  if (!cfg_.mode.is_h2()) {
    const double top = shift_.log_N() + cfg_.xi_span;
    const std::size_t bound = weighted_grid_index_bound(cfg_.gamma, N, top);
    divisors_ = std::make_shared<DivisorTable>(bound + 1);
    grid_ = std::make_shared<WeightedGrid>(
        build_weighted_grid(*cfg_.mode.weight, cfg_.gamma, N, top, *divisors_));
  }
}

GridFunction TOperator::zero_density() const {
  const std::size_t K = round_count(cfg_.xi_span / cfg_.xi_step);
  const double step = cfg_.xi_span / static_cast<double>(K);
  std::vector<double> br(K + 1);
  for (std::size_t c = 0; c <= K; ++c) br[c] = shift_.log_N() + static_cast<double>(c) * step;
  return GridFunction(std::move(br), std::vector<Complex>(K));
}

const WeightedGrid& TOperator::grid_for(std::size_t first_index, double xi_max) const {
  if (first_index == N()) return *grid_;
  if (first_index != 1) throw Error(ErrorCode::InvalidArgument, "coefficients start at N or 1");
  if (!grid_from_one_ || grid_from_one_->upper() < xi_max) {
    const std::size_t bound = weighted_grid_index_bound(cfg_.gamma, 1, xi_max);
    divisors_from_one_ = std::make_shared<DivisorTable>(bound + 1);
    grid_from_one_ = std::make_shared<WeightedGrid>(
        build_weighted_grid(*cfg_.mode.weight, cfg_.gamma, 1, xi_max, *divisors_from_one_));
  }
  return *grid_from_one_;
}

DirichletPolynomial TOperator::coefficients(const GridFunction& phi,
                                            std::size_t first_index) const {
  if (cfg_.mode.is_h2()) return build_h2_coefficients(phi, first_index);
  return build_dalpha_coefficients(phi, grid_for(first_index, phi.upper()));
}

double TOperator::density_norm(const GridFunction& phi) const {
  return cfg_.mode.is_h2() ? phi.l2_norm() : phi.dbeta_norm(cfg_.mode.beta());
}

double TOperator::series_norm(const DirichletPolynomial& F) const {
  if (cfg_.mode.is_h2()) return norm_h2(F);
  const DivisorTable* d = divisors_.get();
  if (divisors_from_one_ && divisors_from_one_->max_index() > d->max_index()) {
    d = divisors_from_one_.get();
  }
  if (F.length() > d->max_index()) {
    const DivisorTable big(F.length());
    return norm_dalpha(F, *cfg_.mode.weight, big);
  }
  return norm_dalpha(F, *cfg_.mode.weight, *d);
}

TOperator::Pieces TOperator::build_pieces(const GridFunction& phi,
                                          std::size_t first_index) const {
  Pieces p;
  p.phi = phi;
  p.F = coefficients(phi, first_index);
  std::vector<Complex> g(quad_.size());
  const std::size_t nt = quad_.nt();
  for (std::size_t i = 0; i < quad_.ns(); ++i) {
    std::size_t k = 0;
    while (k < nt) {
      if (!active_[quad_.index(i, k)]) {
        ++k;
        continue;
      }
      std::size_t e = k;
      while (e < nt && active_[quad_.index(i, e)]) ++e;
      const Complex w0 = quad_.node(i, k);
      const double sg[1] = {w0.real()};
      const auto lf = laplace_lattice(phi, sg, w0.imag(), quad_.ht(), e - k);
      const auto lF = evaluate_lattice(p.F, sg, w0.imag(), quad_.ht(), e - k);
      for (std::size_t q = k; q < e; ++q) {
        const std::size_t idx = quad_.index(i, q);
        const Complex w = quad_.node(i, q);
        const Complex Phi = lf[q - k] - lF[q - k];
        g[idx] = dbar_theta_[idx] * Phi / (B_(w) * shift_(w));
      }
      k = e;
    }
  }
  p.u = std::make_shared<CauchyTransform>(quad_, std::move(g));

  // Large-|s| behaviour of -B E_N u, matched by -E_N (m1/(s-p) + m2/(s-p)^2).
  const Complex c = p.u->expansion_center();
  const Complex M0 = p.u->moment(0);
  const Complex M1 = p.u->moment(1);
  const Complex U0 = M0 / std::numbers::pi;
  const Complex U1 = (M1 + c * M0) / std::numbers::pi;
  double b1 = 0.0;
  for (const auto& z : S_.points()) b1 += z.multiplicity * (2.0 * z.sigma - 1.0);
  p.m1 = U0;
  p.m2 = U1 - b1 * U0 - kModelPole * U0;
  return p;
}

std::function<Complex(Complex)> TOperator::image_function(const GridFunction& phi,
                                                          std::size_t first_index) const {
  auto pieces = std::make_shared<Pieces>(build_pieces(phi, first_index));
  return [this, pieces](Complex s) {
    Complex v = -B_(s) * shift_(s) * (*pieces->u)(s);
    const double th = theta_(s).value;
    if (th != 0.0) v += th * (pieces->phi.laplace(s) - pieces->F(s));
    return v;
  };
}

Application TOperator::apply(const GridFunction& phi, std::size_t first_index) const {
  const Pieces p = build_pieces(phi, first_index);
  Application app;
  app.F = p.F;

  const double logN = shift_.log_N();
  const std::size_t K = round_count(cfg_.xi_span / cfg_.xi_step);
  const double step = cfg_.xi_span / static_cast<double>(K);
  const std::size_t pad = round_count(1.0 / step);
  const std::size_t total = K + 2 * pad;  // cells on [log N - pad step, upper + pad step]
  const double xi0 = logN - static_cast<double>(pad) * step;

  const double sigma0 = 0.5 + cfg_.h_line;
  const std::size_t half = round_count(cfg_.t_max / cfg_.dt_line);
  const double dt = cfg_.dt_line;
  const std::size_t nline = 2 * half + 1;

  // Theta Phi on the part of the line where Theta is nonzero.
  std::size_t k_lo = nline, k_hi = 0;
  for (std::size_t k = 0; k < nline; ++k) {
    const double t = (static_cast<double>(k) - static_cast<double>(half)) * dt;
    if (std::abs(t) < cfg_.R) {
      k_lo = std::min(k_lo, k);
      k_hi = k + 1;
    }
  }
  std::vector<Complex> line_phi;
  if (k_hi > k_lo) {
    const double sg[1] = {sigma0};
    const double t0 = (static_cast<double>(k_lo) - static_cast<double>(half)) * dt;
    line_phi = laplace_lattice(phi, sg, t0, dt, k_hi - k_lo);
    const auto lF = evaluate_lattice(p.F, sg, t0, dt, k_hi - k_lo);
    for (std::size_t q = 0; q < line_phi.size(); ++q) line_phi[q] -= lF[q];
  }

  const Complex pole{kModelPole, 0.0};
  std::vector<double> acc_re(total + 1, 0.0), acc_im(total + 1, 0.0);
  for (std::size_t k = 0; k < nline; ++k) {
    const double t = (static_cast<double>(k) - static_cast<double>(half)) * dt;
    const Complex s{sigma0, t};
    const Complex EN = shift_(s);
    Complex T = -B_(s) * EN * (*p.u)(s);
    if (k >= k_lo && k < k_hi) T += theta_(s).value * line_phi[k - k_lo];
    const Complex zp = 1.0 / (s - pole);
    const Complex model = -EN * (p.m1 * zp + p.m2 * zp * zp);
    const double wt = (k == 0 || k + 1 == nline) ? 0.5 : 1.0;
    const Complex coef = (T - model) / (s - 0.5) * (wt * dt / (2.0 * std::numbers::pi));
    // e^{(s-1/2) xi} along the cell boundaries by rotation.
    Complex z = std::exp((s - 0.5) * xi0);
    const Complex ratio = std::exp((s - 0.5) * step);
    double zr = z.real(), zi = z.imag();
    const double rr = ratio.real(), ri = ratio.imag();
    const double cr = coef.real(), ci = coef.imag();
    for (std::size_t c = 0; c <= total; ++c) {
      acc_re[c] += cr * zr - ci * zi;
      acc_im[c] += cr * zi + ci * zr;
      const double nzr = zr * rr - zi * ri;
      zi = zr * ri + zi * rr;
      zr = nzr;
      if ((c & 63) == 63) {
        z = std::exp((s - 0.5) * (xi0 + static_cast<double>(c + 1) * step));
        zr = z.real();
        zi = z.imag();
      }
    }
  }

  const double lambda = 0.5 - kModelPole;
  std::vector<Complex> integrals(total);
  for (std::size_t c = 0; c < total; ++c) {
    integrals[c] = Complex{acc_re[c + 1] - acc_re[c], acc_im[c + 1] - acc_im[c]};
    if (c >= pad) {
      const double a = static_cast<double>(c - pad) * step;
      const double b = a + step;
      integrals[c] -= p.m1 * exp_cell_moment(a, b, lambda, 0) +
                      p.m2 * exp_cell_moment(a, b, lambda, 1);
    }
  }
  app.mass_below = block_norm(std::span<const Complex>(integrals).subspan(0, pad), step);
  app.spill = block_norm(std::span<const Complex>(integrals).subspan(pad + K, pad), step);

  GridFunction img = zero_density();
  auto vals = img.values();
  for (std::size_t c = 0; c < K; ++c) vals[c] = integrals[pad + c] / step;
  app.image = std::move(img);

  for (const auto& con : constraints_of(S_)) {
    app.targets.push_back(defect(phi, p.F, con.s, con.order));
    app.image_values.push_back(app.image.laplace(con.s, con.order));
  }
  for (std::size_t q = 0; q < app.targets.size(); ++q) {
    app.inversion_defect =
        std::max(app.inversion_defect, std::abs(app.targets[q] - app.image_values[q]));
  }
  return app;
}

std::vector<Complex> TOperator::constraint_values(const GridFunction& phi) const {
  std::vector<Complex> out;
  for (const auto& con : constraints_of(S_)) out.push_back(phi.laplace(con.s, con.order));
  return out;
}

void TOperator::project(GridFunction& phi, const std::vector<Complex>& targets) const {
  const auto cons = constraints_of(S_);
  if (cons.empty()) return;
  if (targets.size() != cons.size()) {
    throw Error(ErrorCode::InvalidArgument, "constraint target count mismatch");
  }
  const std::size_t m = cons.size();
  const std::size_t K = phi.cells();
  const double beta = cfg_.mode.beta();
  Eigen::MatrixXcd A(m, K);
  Eigen::VectorXd winv(K);
  const auto br = phi.breakpoints();
  for (std::size_t c = 0; c < K; ++c) {
    const double a = br[c], b = br[c + 1];
    const double mid = 0.5 * (a + b);
    const double w = (b - a) * (cfg_.mode.is_h2() ? 1.0 : 1.0 + std::pow(mid, beta));
    winv(c) = 1.0 / w;
    for (std::size_t q = 0; q < m; ++q) {
      const double sign = (cons[q].order % 2) ? -1.0 : 1.0;
      A(q, c) = sign * exp_cell_moment(a, b, cons[q].s - 0.5, cons[q].order);
    }
  }
  const auto current = constraint_values(phi);
  Eigen::VectorXcd r(m);
  for (std::size_t q = 0; q < m; ++q) r(q) = targets[q] - current[q];
  const Eigen::MatrixXcd AW = A * winv.asDiagonal();
  const Eigen::MatrixXcd G = AW * A.adjoint();
  const Eigen::VectorXcd y = G.fullPivLu().solve(r);
  const Eigen::VectorXcd delta = winv.asDiagonal() * (A.adjoint() * y);
  auto vals = phi.values();
  for (std::size_t c = 0; c < K; ++c) vals[c] += delta(c);
}

GridFunction starting_density(const TOperator& T) {
  // Partial fractions of B(s) / (s + 1/2): poles at -1/2 and at the reflections 1 - conj(w).
  struct Pole {
    Complex q;
    int mult;
  };
  std::vector<Pole> poles{{{-0.5, 0.0}, 1}};
  for (const auto& z : T.sequence().points()) {
    const Complex q = 1.0 - std::conj(z.point());
    auto it = std::find_if(poles.begin(), poles.end(),
                           [&](const Pole& p) { return std::abs(p.q - q) < 1e-13; });
    if (it != poles.end()) {
      it->mult += z.multiplicity;
    } else {
      poles.push_back({q, z.multiplicity});
    }
  }

  // coeff[i][r-1] multiplies 1/(s - q_i)^r.
  std::vector<std::vector<Complex>> coeff;
  for (std::size_t i = 0; i < poles.size(); ++i) {
    const int mu = poles[i].mult;
    std::vector<Complex> series(mu, Complex{});
    series[0] = 1.0;
    auto mul = [&](const std::vector<Complex>& f) {
      std::vector<Complex> out(mu, Complex{});
      for (int a = 0; a < mu; ++a) {
        for (int b = 0; a + b < mu; ++b) out[a + b] += series[a] * f[b];
      }
      series = std::move(out);
    };
    for (const auto& z : T.sequence().points()) {
      // (z + (q_i - w))
      std::vector<Complex> f(mu, Complex{});
      f[0] = poles[i].q - z.point();
      if (mu > 1) f[1] = 1.0;
      for (int m = 0; m < z.multiplicity; ++m) mul(f);
    }
    for (std::size_t j = 0; j < poles.size(); ++j) {
      if (j == i) continue;
      // (z + d)^{-1} = sum (-1)^n z^n / d^{n+1}
      const Complex d = poles[i].q - poles[j].q;
      std::vector<Complex> f(mu);
      Complex pw = 1.0 / d;
      for (int n = 0; n < mu; ++n) {
        f[n] = (n % 2 ? -1.0 : 1.0) * pw;
        pw /= d;
      }
      for (int m = 0; m < poles[j].mult; ++m) mul(f);
    }
    std::vector<Complex> c(mu);
    for (int k = 0; k < mu; ++k) c[mu - 1 - k] = series[k];
    coeff.push_back(std::move(c));
  }

  GridFunction phi = T.zero_density();
  const auto br = phi.breakpoints();
  auto vals = phi.values();
  const double logN = T.shift().log_N();
  for (std::size_t c = 0; c < phi.cells(); ++c) {
    const double a = br[c] - logN;
    const double b = br[c + 1] - logN;
    Complex acc{};
    for (std::size_t i = 0; i < poles.size(); ++i) {
      const Complex lambda = 0.5 - poles[i].q;
      double fact = 1.0;
      for (int r = 1; r <= poles[i].mult; ++r) {
        if (r > 1) fact *= (r - 1);
        acc += coeff[i][r - 1] * exp_cell_moment(a, b, lambda, r - 1) / fact;
      }
    }
    vals[c] = acc / (b - a);
  }
  return phi;
}

namespace {

GridFunction random_density(const TOperator& T, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  GridFunction phi = T.zero_density();
  const auto br = phi.breakpoints();
  auto vals = phi.values();
  struct Wave {
    Complex amp;
    double decay;
    double freq;
  };
  std::vector<Wave> waves;
  for (int q = 0; q < 3; ++q) {
    waves.push_back({{gauss(rng), gauss(rng)}, 1.5 * unif(rng), 20.0 * unif(rng)});
  }
  const double noise = 0.3;
  for (std::size_t c = 0; c < phi.cells(); ++c) {
    const double x = 0.5 * (br[c] + br[c + 1]) - br[0];
    Complex v{};
    for (const auto& w : waves) v += w.amp * std::exp(Complex{-w.decay * x, w.freq * x});
    v += noise * Complex{gauss(rng), gauss(rng)};
    vals[c] = v;
  }
  const double nrm = T.density_norm(phi);
  if (nrm > 0.0) phi *= 1.0 / nrm;
  return phi;
}

}  // namespace

double contraction_ratio(const TOperator& T, const GridFunction& phi) {
  const double n0 = T.density_norm(phi);
  if (n0 == 0.0) return 0.0;
  return T.density_norm(T.apply(phi, T.N()).image) / n0;
}

ContractionEstimate estimate_contraction(const TOperator& T, int trials, int power_steps,
                                         std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  std::mt19937_64 rng(seed);
  ContractionEstimate est;
  for (int tr = 0; tr < trials; ++tr) {
    GridFunction phi = random_density(T, rng);
    for (int st = 0; st < std::max(1, power_steps); ++st) {
      const double n0 = T.density_norm(phi);
      if (n0 == 0.0) break;
      GridFunction next = T.apply(phi, T.N()).image;
      const double n1 = T.density_norm(next);
      est.samples.push_back(n1 / n0);
      est.rho = std::max(est.rho, n1 / n0);
      if (n1 == 0.0) break;
      next *= 1.0 / n1;
      phi = std::move(next);
    }
  }
  return est;
}

ConstructionResult run_iteration(const TOperator& T, const GridFunction* target) {
  const ConstructionConfig& cfg = T.config();
  ConstructionResult res;
  IterationCertificate& cert = res.cert;
  cert.mode = cfg.mode.name();
  cert.kind = target ? "interpolation" : "vanishing";
  cert.N = T.N();
  cert.min_divisor = T.min_divisor();

  const auto cons = constraints_of(T.sequence());
  std::vector<Complex> goal(cons.size(), Complex{});
  GridFunction f;
  std::size_t first_index = T.N();
  if (target) {
    f = *target;
    first_index = 1;
    goal = T.constraint_values(*target);
    cert.start_norm = cert.start_norm_projected = T.density_norm(f);
  } else {
    f = starting_density(T);
    cert.start_norm = T.density_norm(f);
    T.project(f, goal);
    cert.start_norm_projected = T.density_norm(f);
  }

  DirichletPolynomial total;
  double F0_norm = 0.0;
  for (int j = 0; j < cfg.max_iterations; ++j) {
    Application app = T.apply(f, first_index);
    GridFunction next = std::move(app.image);
    T.project(next, app.targets);
    total += app.F;

    IterationRecord rec;
    rec.j = j;
    rec.F_norm = T.series_norm(app.F);
    rec.F_at_three_halves = std::abs(app.F(Complex{1.5, 0.0}));
    rec.density_norm = T.density_norm(f);
    rec.inversion_defect = app.inversion_defect;
    rec.mass_below = app.mass_below;
    rec.spill = app.spill;
    const auto nv = T.constraint_values(next);
    for (std::size_t q = 0; q < cons.size(); ++q) {
      const Complex v = total.derivative(cons[q].s, cons[q].order) + nv[q] - goal[q];
      rec.residual = std::max(rec.residual, std::abs(v));
    }
    if (j == 0) {
      F0_norm = rec.F_norm;
      if (target && rec.density_norm > 0.0) {
        cert.first_step_ratio = T.density_norm(next) / rec.density_norm;
      }
    }
    cert.records.push_back(rec);
    f = std::move(next);
    first_index = T.N();
    if (rec.F_norm <= cfg.eps_stop * F0_norm || T.density_norm(f) == 0.0) {
      cert.converged = true;
      break;
    }
  }

  res.F = std::move(total);
  cert.F_norm = T.series_norm(res.F);
  cert.F_at_three_halves = std::abs(res.F(Complex{1.5, 0.0}));
  if (!cert.records.empty()) cert.head_value = cert.records.front().F_at_three_halves;
  for (std::size_t j = 1; j < cert.records.size(); ++j) {
    cert.tail_sum += cert.records[j].F_at_three_halves;
  }
  for (std::size_t j = 1; j + 1 < cert.records.size(); ++j) {
    const double a = cert.records[j].F_norm;
    if (a > 0.0) {
      cert.max_step_ratio = std::max(cert.max_step_ratio, cert.records[j + 1].F_norm / a);
    }
  }
  for (std::size_t q = 0; q < cons.size(); ++q) {
    const Complex v = res.F.derivative(cons[q].s, cons[q].order) - goal[q];
    cert.max_residual = std::max(cert.max_residual, std::abs(v));
  }
  cert.nontrivial = cert.head_value > cert.tail_sum;
  if (target) {
    cert.vanishing = cert.max_residual <= cfg.eps_interp * T.density_norm(*target);
  } else {
    cert.vanishing = cert.max_residual <= cfg.eps_vanish * cert.F_norm;
  }
  return res;
}

namespace {

void finish(IterationCertificate& cert, bool vanishing_kind) {
  cert.geometric = cert.max_step_ratio <= cert.rho_hat * 1.1 && cert.rho_hat < 1.0;
  cert.certified = cert.converged && cert.geometric && cert.vanishing &&
                   (!vanishing_kind || cert.nontrivial);
}

}  // namespace

std::unique_ptr<TOperator> select_operator(const PointSequence& S, const ConstructionConfig& cfg,
                                           IterationCertificate& cert) {
  std::size_t N = std::max<std::size_t>(2, cfg.N_start);
  if (N > cfg.N_cap) throw Error(ErrorCode::InvalidArgument, "N_start exceeds N_cap");
  for (;;) {
    auto T = std::make_unique<TOperator>(S, N, cfg);
    const auto est = estimate_contraction(*T, cfg.trials, cfg.power_steps, cfg.seed);
    cert.N_sweep.emplace_back(N, est.rho);
    cert.rho_hat = est.rho;
    if (est.rho < cfg.rho_target) return T;
    if (2 * N > cfg.N_cap) {
      if (est.rho < 1.0) return T;
      throw Error(ErrorCode::NoContraction,
                  "contraction estimate " + std::to_string(est.rho) + " at N = " +
                      std::to_string(N) + " (cap " + std::to_string(cfg.N_cap) + ")");
    }
    N *= 2;
  }
}

ConstructionResult construct_vanishing(const PointSequence& S, const ConstructionConfig& cfg) {
  if (S.empty()) {
    // Nothing to correct: F is the first approximation itself.
    const TOperator T(S, std::max<std::size_t>(2, cfg.N_start), cfg);
    const GridFunction f = starting_density(T);
    ConstructionResult res;
    IterationCertificate& cert = res.cert;
    res.F = T.coefficients(f, T.N());
    cert.mode = cfg.mode.name();
    cert.kind = "vanishing";
    cert.N = T.N();
    cert.min_divisor = T.min_divisor();
    cert.start_norm = cert.start_norm_projected = T.density_norm(f);
    IterationRecord rec;
    rec.F_norm = cert.F_norm = T.series_norm(res.F);
    rec.F_at_three_halves = cert.F_at_three_halves = cert.head_value =
        std::abs(res.F(Complex{1.5, 0.0}));
    rec.density_norm = cert.start_norm;
    cert.records.push_back(rec);
    cert.converged = true;
    cert.nontrivial = cert.head_value > 0.0;
    cert.vanishing = true;
    finish(cert, true);
    return res;
  }
  IterationCertificate sel;
  auto T = select_operator(S, cfg, sel);
  for (;;) {
    ConstructionResult res = run_iteration(*T, nullptr);
    res.cert.rho_hat = sel.rho_hat;
    res.cert.N_sweep = sel.N_sweep;
    finish(res.cert, true);
    if (res.cert.nontrivial) return res;
    const std::size_t N = 2 * T->N();
    if (N > cfg.N_cap) {
      throw Error(ErrorCode::NontrivialityFailed,
                  "|F_0(3/2)| = " + std::to_string(res.cert.head_value) +
                      " does not dominate the tail " + std::to_string(res.cert.tail_sum));
    }
    T = std::make_unique<TOperator>(S, N, cfg);
    const auto est = estimate_contraction(*T, cfg.trials, cfg.power_steps, cfg.seed);
    sel.N_sweep.emplace_back(N, est.rho);
    sel.rho_hat = est.rho;
  }
}

ConstructionResult interpolate_on_sequence(const PointSequence& S, const GridFunction& target,
                                           const ConstructionConfig& cfg) {
  if (target.support_lower() < 0.0) {
    throw Error(ErrorCode::SupportMismatch, "target density has mass below 0");
  }
  IterationCertificate sel;
  auto T = select_operator(S, cfg, sel);
  ConstructionResult res = run_iteration(*T, &target);
  res.cert.rho_hat = sel.rho_hat;
  res.cert.N_sweep = sel.N_sweep;
  finish(res.cert, false);
  return res;
}

AnalyticFunction construct_hinfty_vanishing(std::span<const SequencePoint> S) {
  std::vector<std::pair<Complex, int>> zeros;
  for (const auto& p : S) {
    if (!std::isfinite(p.sigma) || !std::isfinite(p.t) || !(p.sigma > 0.0) ||
        p.multiplicity < 1) {
      throw Error(ErrorCode::InvalidSequence, "points must lie in Re s > 0");
    }
    zeros.emplace_back(std::exp(-p.point() * std::numbers::ln2), p.multiplicity);
  }
  return [zeros](Complex s) {
    const Complex z = std::exp(-s * std::numbers::ln2);
    Complex v{1.0, 0.0};
    for (const auto& [a, m] : zeros) {
      const Complex b = (z - a) / (1.0 - std::conj(a) * z);
      for (int k = 0; k < m; ++k) v *= b;
    }
    return v;
  };
}

}  // namespace dirzero

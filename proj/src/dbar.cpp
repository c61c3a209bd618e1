#include "dirzero/dbar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "dirzero/error.hpp"

namespace dirzero {

namespace {

constexpr int kMultipoleTerms = 48;
constexpr int kNear = 2;

}  // namespace

RampSample smooth_ramp(double x, double sharpness) {
  if (x <= 0.0) return {0.0, 0.0};
  if (x >= 1.0) return {1.0, 0.0};
  const double a = sharpness;
  // psi = 1 / (1 + e^q), q = a/x - a/(1-x)
  const double q = a / x - a / (1.0 - x);
  double psi;
  if (q > 0) {
    const double e = std::exp(-q);
    psi = e / (1.0 + e);
  } else {
    psi = 1.0 / (1.0 + std::exp(q));
  }
  if (psi == 0.0 || psi == 1.0) return {psi, 0.0};
  const double slope = psi * (1.0 - psi) * (a / (x * x) + a / ((1.0 - x) * (1.0 - x)));
  return {psi, slope};
}

CutoffTheta::CutoffTheta(double R, double sharpness) : R_(R), sharpness_(sharpness) {
  if (!(R > 1.0)) throw Error(ErrorCode::InvalidArgument, "cutoff needs R > 1");
  if (!(sharpness > 0.0)) throw Error(ErrorCode::InvalidArgument, "ramp sharpness must be > 0");
  // The steepest gradient sits in the corner where both ramps are active.
  constexpr int n = 400;
  std::vector<RampSample> prof(n + 1);
  for (int i = 0; i <= n; ++i) prof[i] = smooth_ramp(static_cast<double>(i) / n, sharpness);
  double best = 0.0;
  for (int i = 0; i <= n; ++i) {
    for (int k = 0; k <= n; ++k) {
      const double gx = prof[i].slope * prof[k].value;
      const double gy = prof[i].value * prof[k].slope;
      best = std::max(best, gx * gx + gy * gy);
    }
  }
  max_gradient_ = std::sqrt(best);
  if (max_gradient_ > 2.0) {
    throw Error(ErrorCode::InvalidArgument,
                "ramp sharpness " + std::to_string(sharpness) + " gives |grad Theta| = " +
                    std::to_string(max_gradient_) + " > 2");
  }
}

CutoffTheta::Sample CutoffTheta::operator()(Complex s) const {
  const double sigma = s.real();
  const double t = s.imag();
  const RampSample rs = smooth_ramp(2.5 - sigma, sharpness_);
  const RampSample rt = smooth_ramp(R_ - std::abs(t), sharpness_);
  const double sign = t < 0 ? -1.0 : 1.0;
  return {rs.value * rt.value, -rs.slope * rt.value, -sign * rs.value * rt.slope};
}

Complex CutoffTheta::dbar(Complex s) const {
  const Sample v = (*this)(s);
  return {0.5 * v.d_sigma, 0.5 * v.d_t};
}

bool CutoffTheta::gradient_nonzero(Complex s) const {
  const Sample v = (*this)(s);
  return v.d_sigma != 0.0 || v.d_t != 0.0;
}

AreaQuadrature::AreaQuadrature(double sigma_lo, double t_lo, double hs, double ht,
                               std::size_t ns, std::size_t nt)
    : sigma_lo_(sigma_lo), t_lo_(t_lo), hs_(hs), ht_(ht), ns_(ns), nt_(nt) {
  if (!(hs > 0.0) || !(ht > 0.0) || ns == 0 || nt == 0) {
    throw Error(ErrorCode::InvalidArgument, "quadrature needs positive cell sizes and counts");
  }
}

AreaQuadrature AreaQuadrature::over(const StripRegion& region, double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "cell size must be > 0");
  const auto ns = static_cast<std::size_t>(std::max(1.0, std::round(region.tau() / h)));
  const auto nt = static_cast<std::size_t>(std::max(1.0, std::round(2.0 * region.R() / h)));
  return AreaQuadrature(0.5, -region.R(), region.tau() / static_cast<double>(ns),
                        2.0 * region.R() / static_cast<double>(nt), ns, nt);
}

AreaQuadrature AreaQuadrature::disk(Complex center, double radius, double h, int sub) {
  if (!(radius > 0.0) || sub < 1) throw Error(ErrorCode::InvalidArgument, "bad disk quadrature");
  const auto n = static_cast<std::size_t>(std::ceil(2.0 * radius / h));
  const double step = 2.0 * radius / static_cast<double>(n);
  AreaQuadrature q(center.real() - radius, center.imag() - radius, step, step, n, n);
  q.fraction_.assign(n * n, 0.0);
  q.centroid_off_.assign(n * n, Complex{});
  const double r2 = radius * radius;
  auto inside = [&](Complex w) { return std::norm(w - center) <= r2; };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex c0 = q.corner(i, k);
      const bool all = inside(c0) && inside(c0 + step) && inside(c0 + Complex{0, step}) &&
                       inside(c0 + Complex{step, step});
      const std::size_t idx = q.index(i, k);
      if (all) {
        q.fraction_[idx] = 1.0;
        continue;
      }
      int hits = 0;
      Complex acc{};
      for (int a = 0; a < sub; ++a) {
        for (int b = 0; b < sub; ++b) {
          const Complex off{(a + 0.5) * step / sub, (b + 0.5) * step / sub};
          if (inside(c0 + off)) {
            ++hits;
            acc += off;
          }
        }
      }
      if (hits == 0) continue;
      q.fraction_[idx] = static_cast<double>(hits) / (sub * sub);
      q.centroid_off_[idx] = acc / static_cast<double>(hits) - Complex{0.5 * step, 0.5 * step};
    }
  }
  return q;
}

Complex AreaQuadrature::node(std::size_t i, std::size_t k) const noexcept {
  const Complex c = center(i, k);
  return centroid_off_.empty() ? c : c + centroid_off_[index(i, k)];
}

double AreaQuadrature::weight(std::size_t i, std::size_t k) const noexcept {
  const double full_area = hs_ * ht_;
  return fraction_.empty() ? full_area : full_area * fraction_[index(i, k)];
}

bool AreaQuadrature::full(std::size_t i, std::size_t k) const noexcept {
  return fraction_.empty() || fraction_[index(i, k)] == 1.0;
}

double AreaQuadrature::total_weight() const noexcept {
  if (fraction_.empty()) return hs_ * ht_ * static_cast<double>(ns_ * nt_);
  long double acc = 0.0L;
  for (double f : fraction_) acc += f;
  return static_cast<double>(acc) * hs_ * ht_;
}

std::vector<Complex> AreaQuadrature::sample(const std::function<Complex(Complex)>& g) const {
  std::vector<Complex> out(size());
  for (std::size_t i = 0; i < ns_; ++i) {
    for (std::size_t k = 0; k < nt_; ++k) {
      if (weight(i, k) > 0.0) out[index(i, k)] = g(node(i, k));
    }
  }
  return out;
}

namespace {

struct RectVertices {
  Complex z[4];
};

// Vertices of the rectangle relative to s, counter-clockwise. Nudges s off edge lines
// through the closed rectangle, where the boundary logarithms are singular.
RectVertices rect_vertices(Complex corner, double hs, double ht, Complex s) {
  const double scale = hs + ht;
  for (int attempt = 0; attempt < 4; ++attempt) {
    RectVertices v{{corner - s, corner + hs - s, corner + Complex{hs, ht} - s,
                    corner + Complex{0.0, ht} - s}};
    bool bad = false;
    for (int e = 0; e < 4 && !bad; ++e) {
      const Complex za = v.z[e];
      const Complex zb = v.z[(e + 1) % 4];
      if (std::abs(za) < 1e-13 * scale) {
        bad = true;
        break;
      }
      const Complex r = zb / za;
      if (r.real() < 0.0 && std::abs(r.imag()) < 1e-12 * std::abs(r)) bad = true;
    }
    if (!bad) return v;
    s += Complex{1e-10 * scale, 0.7e-10 * scale};
  }
  return {{corner - s, corner + hs - s, corner + Complex{hs, ht} - s,
           corner + Complex{0.0, ht} - s}};
}

}  // namespace

Complex rect_cauchy_integral(Complex corner, double hs, double ht, Complex s) {
  const RectVertices v = rect_vertices(corner, hs, ht, s);
  Complex acc{};
  for (int e = 0; e < 4; ++e) {
    const Complex za = v.z[e];
    const Complex zb = v.z[(e + 1) % 4];
    const Complex d = zb - za;
    const Complex q = std::conj(d) / d;
    const Complex p = std::conj(za) - q * za;
    acc += p * std::log(zb / za) + q * d;
  }
  // int 1/(s-w) = -int 1/z = -(1/2i) closed integral of conj(z)/z dz
  return Complex{0.0, 0.5} * acc;
}

Complex rect_conj_ratio_integral(Complex corner, double hs, double ht, Complex s) {
  const RectVertices v = rect_vertices(corner, hs, ht, s);
  Complex acc{};
  for (int e = 0; e < 4; ++e) {
    const Complex za = v.z[e];
    const Complex zb = v.z[(e + 1) % 4];
    const Complex d = zb - za;
    const Complex q = std::conj(d) / d;
    const Complex p = std::conj(za) - q * za;
    acc += p * p * std::log(zb / za) + 2.0 * p * q * d + 0.5 * q * q * (zb * zb - za * za);
  }
  return Complex{0.0, -0.25} * acc;
}

CauchyTransform::CauchyTransform(AreaQuadrature quad, std::vector<Complex> g)
    : quad_(std::move(quad)), g_(std::move(g)) {
  if (g_.size() != quad_.size()) {
    throw Error(ErrorCode::InvalidArgument, "sample count does not match quadrature");
  }
  const std::size_t ns = quad_.ns();
  const std::size_t nt = quad_.nt();
  dg_.assign(g_.size(), Complex{});
  dbarg_.assign(g_.size(), Complex{});
  // Values outside the rectangle count as zero; partial cells get no gradient model.
  auto value = [&](long i, long k, bool& ok) -> Complex {
    if (i < 0 || k < 0 || i >= static_cast<long>(ns) || k >= static_cast<long>(nt)) {
      return {};
    }
    if (!quad_.full(i, k)) ok = false;
    return g_[quad_.index(i, k)];
  };
  for (std::size_t i = 0; i < ns; ++i) {
    for (std::size_t k = 0; k < nt; ++k) {
      if (!quad_.full(i, k)) continue;
      bool ok = true;
      const long li = static_cast<long>(i), lk = static_cast<long>(k);
      const Complex gs = (value(li + 1, lk, ok) - value(li - 1, lk, ok)) / (2.0 * quad_.hs());
      const Complex gt = (value(li, lk + 1, ok) - value(li, lk - 1, ok)) / (2.0 * quad_.ht());
      if (!ok) continue;
      const Complex I{0.0, 1.0};
      dg_[quad_.index(i, k)] = 0.5 * (gs - I * gt);
      dbarg_[quad_.index(i, k)] = 0.5 * (gs + I * gt);
    }
  }

  center_ = Complex{quad_.sigma_lo() + 0.5 * quad_.hs() * static_cast<double>(ns),
                    quad_.t_lo() + 0.5 * quad_.ht() * static_cast<double>(nt)};
  const double half_diag = 0.5 * std::hypot(quad_.hs(), quad_.ht());
  moments_.assign(kMultipoleTerms, Complex{});
  for (std::size_t i = 0; i < ns; ++i) {
    for (std::size_t k = 0; k < nt; ++k) {
      const Complex gv = g_[quad_.index(i, k)];
      const double wgt = quad_.weight(i, k);
      if (gv == Complex{} || wgt == 0.0) continue;
      const Complex w = quad_.node(i, k);
      const Complex m = gv * wgt;
      node_re_.push_back(w.real());
      node_im_.push_back(w.imag());
      mass_re_.push_back(m.real());
      mass_im_.push_back(m.imag());
      radius_ = std::max(radius_, std::abs(quad_.center(i, k) - center_) + half_diag);
      Complex pw{1.0, 0.0};
      const Complex z = w - center_;
      for (int j = 0; j < kMultipoleTerms; ++j) {
        moments_[j] += m * pw;
        pw *= z;
      }
    }
  }
}

Complex CauchyTransform::direct(Complex s) const {
  const double sr = s.real();
  const double si = s.imag();
  double re = 0.0;
  double im = 0.0;
  const std::size_t n = node_re_.size();
  // Nodes this close to s are dropped here and only enter through the exact near-field cell.
  const double tiny = 1e-12 * quad_.hs() * quad_.ht();
  for (std::size_t j = 0; j < n; ++j) {
    const double dx = sr - node_re_[j];
    const double dy = si - node_im_[j];
    const double r2 = dx * dx + dy * dy;
    if (r2 <= tiny) continue;
    const double inv = 1.0 / r2;
    re += (mass_re_[j] * dx + mass_im_[j] * dy) * inv;
    im += (mass_im_[j] * dx - mass_re_[j] * dy) * inv;
  }
  Complex acc{re, im};

  const double hs = quad_.hs();
  const double ht = quad_.ht();
  const long is = static_cast<long>(std::floor((sr - quad_.sigma_lo()) / hs));
  const long ks = static_cast<long>(std::floor((si - quad_.t_lo()) / ht));
  for (long i = is - kNear; i <= is + kNear; ++i) {
    if (i < 0 || i >= static_cast<long>(quad_.ns())) continue;
    for (long k = ks - kNear; k <= ks + kNear; ++k) {
      if (k < 0 || k >= static_cast<long>(quad_.nt())) continue;
      if (!quad_.full(i, k)) continue;
      const std::size_t idx = quad_.index(i, k);
      const Complex gc = g_[idx];
      const Complex a = dg_[idx];
      const Complex b = dbarg_[idx];
      if (gc == Complex{} && a == Complex{} && b == Complex{}) continue;
      const Complex c = quad_.center(i, k);
      if (gc != Complex{} && std::norm(s - c) > tiny) acc -= gc * (hs * ht) / (s - c);
      const Complex corner = quad_.corner(i, k);
      const Complex k0 = rect_cauchy_integral(corner, hs, ht, s);
      Complex cell = gc * k0;
      if (a != Complex{} || b != Complex{}) {
        const Complex J = rect_conj_ratio_integral(corner, hs, ht, s);
        const Complex i1 = -hs * ht + (s - c) * k0;
        const Complex i2 = -J + std::conj(s - c) * k0;
        cell += a * i1 + b * i2;
      }
      acc += cell;
    }
  }
  return acc / std::numbers::pi;
}

Complex CauchyTransform::multipole(Complex s) const {
  const Complex z = 1.0 / (s - center_);
  Complex acc{};
  for (int j = kMultipoleTerms - 1; j >= 0; --j) acc = acc * z + moments_[j];
  return acc * z / std::numbers::pi;
}

Complex CauchyTransform::operator()(Complex s) const {
  if (node_re_.empty()) return {};
  if (std::abs(s - center_) > 2.0 * radius_) return multipole(s);
  return direct(s);
}

double dbar_residual(const std::function<Complex(Complex)>& u,
                     const std::function<Complex(Complex)>& g, std::span<const Complex> probes,
                     double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "difference step must be > 0");
  double worst = 0.0;
  const Complex I{0.0, 1.0};
  for (const Complex s : probes) {
    const Complex us = (u(s + h) - u(s - h)) / (2.0 * h);
    const Complex ut = (u(s + I * h) - u(s - I * h)) / (2.0 * h);
    const Complex d = 0.5 * (us + I * ut);
    const Complex gv = g(s);
    worst = std::max(worst, std::abs(d - gv) / (1.0 + std::abs(gv)));
  }
  return worst;
}

CauchyBoundsReport cauchy_bounds_check(const std::function<Complex(Complex)>& u, double eps,
                                       const StripRegion& region,
                                       std::span<const Complex> probes) {
  CauchyBoundsReport rep;
  double max_u = 0.0;
  for (const Complex s : probes) {
    const double au = std::abs(u(s));
    max_u = std::max(max_u, au);
    const double dist = region.distance(s);
    if (dist <= 0.0) continue;
    ++rep.exterior_probes;
    const double scaled = au * std::numbers::pi * dist;
    const double bound_area = region.area() * eps;
    const double bound_r = region.R() * eps;
    const double ratio = bound_area > 0.0 ? scaled / bound_area
                                          : (scaled > 0.0 ? std::numeric_limits<double>::infinity()
                                                          : 0.0);
    rep.far_ratio_area = std::max(rep.far_ratio_area, ratio);
    if (bound_r > 0.0) rep.far_ratio_R = std::max(rep.far_ratio_R, scaled / bound_r);
    if (ratio > 1.0 + 1e-9) {
      throw Error(ErrorCode::FarFieldViolation,
                  "|u| exceeds area*eps/(pi dist) by factor " + std::to_string(ratio));
    }
  }
  if (eps > 0.0 && region.R() > 1.0) rep.empirical_c = max_u / (eps * std::log(region.R()));
  return rep;
}

void write_lattice_csv(std::ostream& out, const std::function<Complex(Complex)>& u,
                       std::span<const double> sigmas, std::span<const double> ts) {
  out << "sigma,t,re_u,im_u\n";
  out.precision(17);
  for (double sg : sigmas) {
    for (double t : ts) {
      const Complex v = u({sg, t});
      out << sg << ',' << t << ',' << v.real() << ',' << v.imag() << '\n';
    }
  }
}

}  // namespace dirzero

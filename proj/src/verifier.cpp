#include "dirzero/verifier.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>

#include "dirzero/error.hpp"

namespace dirzero {

namespace {

using Contour = std::function<Complex(double)>;  // closed curve on u in [0, 1]

struct Tracker {
  const AnalyticFunction& f;
  const Contour& z;
  double tol;

  Complex value(double u) const {
    const Complex p = z(u);
    const Complex v = f(p);
    if (!(std::abs(v) >= tol)) {
      throw Error(ErrorCode::BoundaryTooClose,
                  "|f| = " + std::to_string(std::abs(v)) + " at (" + std::to_string(p.real()) +
                      ", " + std::to_string(p.imag()) + ") on the contour");
    }
    return v;
  }

  double track(double ua, Complex fa, double ub, Complex fb, int depth) const {
    const double d = std::arg(fb / fa);
    if (std::abs(d) <= std::numbers::pi / 2 || depth > 48) return d;
    const double um = 0.5 * (ua + ub);
    const Complex fm = value(um);
    return track(ua, fa, um, fm, depth + 1) + track(um, fm, ub, fb, depth + 1);
  }

  int winding(std::size_t n) const {
    for (int attempt = 0; attempt < 5; ++attempt, n *= 2) {
      double total = 0.0;
      const Complex f0 = value(0.0);
      Complex prev = f0;
      for (std::size_t k = 1; k <= n; ++k) {
        const double ua = static_cast<double>(k - 1) / static_cast<double>(n);
        const double ub = static_cast<double>(k) / static_cast<double>(n);
        const Complex cur = (k == n) ? f0 : value(ub);
        total += track(ua, prev, ub, cur, 0);
        prev = cur;
      }
      const double w = total / (2.0 * std::numbers::pi);
      const double r = std::round(w);
      if (std::abs(w - r) <= 1e-3) return static_cast<int>(r);
    }
    throw Error(ErrorCode::InvalidArgument, "winding number did not settle to an integer");
  }
};

std::size_t base_samples(double length) {
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(length / 0.005)), 256, 40000);
}

}  // namespace

void Box::validate() const {
  if (!std::isfinite(sigma_lo) || !std::isfinite(sigma_hi) || !std::isfinite(t_lo) ||
      !std::isfinite(t_hi) || !(sigma_lo < sigma_hi) || !(t_lo < t_hi)) {
    throw Error(ErrorCode::InvalidArgument, "box sides must be finite and ordered");
  }
}

int count_zeros(const AnalyticFunction& f, const Box& box, double tol) {
  box.validate();
  const double w = box.sigma_hi - box.sigma_lo;
  const double h = box.t_hi - box.t_lo;
  const double per = 2.0 * (w + h);
  const Contour z = [&](double u) {
    double d = u * per;
    if (d <= w) return Complex{box.sigma_lo + d, box.t_lo};
    d -= w;
    if (d <= h) return Complex{box.sigma_hi, box.t_lo + d};
    d -= h;
    if (d <= w) return Complex{box.sigma_hi - d, box.t_hi};
    d -= w;
    return Complex{box.sigma_lo, box.t_hi - std::min(d, h)};
  };
  return Tracker{f, z, tol}.winding(base_samples(per));
}

int count_zeros(const AnalyticFunction& f, Complex center, double radius, double tol) {
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be > 0");
  const Contour z = [&](double u) {
    return center + radius * std::exp(Complex{0.0, 2.0 * std::numbers::pi * u});
  };
  return Tracker{f, z, tol}.winding(base_samples(2.0 * std::numbers::pi * radius));
}

std::vector<double> vertical_repetition_scan(const DirichletPolynomial& f, Complex base,
                                             double t_lo, double t_hi, double tol) {
  std::vector<double> out;
  if (!(t_lo < t_hi) || f.empty()) return out;
  const double top_log = std::log(std::max<double>(2.0, static_cast<double>(f.length())));
  const double step = std::min(0.01, 0.25 / top_log);
  const auto n = static_cast<std::size_t>(std::ceil((t_hi - t_lo) / step)) + 1;
  const double sg[1] = {base.real()};
  const auto vals = evaluate_lattice(f, sg, base.imag() + t_lo, step, n);
  // Lipschitz bound of f along the vertical line.
  double lip = 0.0;
  for (const auto& [k, a] : f.terms()) {
    const double ln = std::log(static_cast<double>(k));
    lip += std::abs(a) * ln * std::exp(-base.real() * ln);
  }
  auto mag2 = [&](double tau) { return std::norm(f(base + Complex{0.0, tau})); };
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::abs(vals[i]);
    if (v > tol + lip * step) continue;
    if (i > 0 && std::abs(vals[i - 1]) < v) continue;
    if (i + 1 < n && std::abs(vals[i + 1]) <= v) continue;
    const double tau = t_lo + static_cast<double>(i) * step;
    const double a = std::max(t_lo, tau - step);
    const double b = std::min(t_hi, tau + step);
    auto [x, fx] = boost::math::tools::brent_find_minima(
        mag2, a, b, std::numeric_limits<double>::digits / 2);
    // Brent on |f|^2 stops near sqrt(eps); Gauss-Newton on f along the line finishes it.
    for (int it = 0; it < 4; ++it) {
      const Complex s = base + Complex{0.0, x};
      const Complex d = Complex{0.0, 1.0} * f.derivative(s, 1);
      const double dd = std::norm(d);
      if (dd == 0.0) break;
      const double next = std::clamp(x - std::real(std::conj(d) * f(s)) / dd, a, b);
      const double fn = mag2(next);
      if (!(fn < fx)) break;
      x = next;
      fx = fn;
    }
    if (std::sqrt(fx) < tol && std::abs(x) >= 1e-3) {
      if (out.empty() || std::abs(out.back() - x) > step) out.push_back(x);
    }
  }
  return out;
}

namespace {

void locate(const AnalyticFunction& f, const Box& box, double resolution, double tol,
            int count, std::vector<ZeroEstimate>& out, int depth) {
  if (count == 0) return;
  const double w = box.sigma_hi - box.sigma_lo;
  const double h = box.t_hi - box.t_lo;
  if (std::max(w, h) <= resolution || depth > 200) {
    out.push_back({0.5 * (box.sigma_lo + box.sigma_hi), 0.5 * (box.t_lo + box.t_hi), count});
    return;
  }
  // Split the longer side; move the cut if it runs too close to a zero.
  for (double frac : {0.5, 0.5137, 0.4789, 0.5411}) {
    Box a = box, b = box;
    if (w >= h) {
      a.sigma_hi = b.sigma_lo = box.sigma_lo + frac * w;
    } else {
      a.t_hi = b.t_lo = box.t_lo + frac * h;
    }
    try {
      const int ca = count_zeros(f, a, tol);
      const int cb = count_zeros(f, b, tol);
      locate(f, a, resolution, tol, ca, out, depth + 1);
      locate(f, b, resolution, tol, cb, out, depth + 1);
      return;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BoundaryTooClose) throw;
    }
  }
  out.push_back({0.5 * (box.sigma_lo + box.sigma_hi), 0.5 * (box.t_lo + box.t_hi), count});
}

}  // namespace

NecessityReport necessity_check(const DirichletPolynomial& F, const Box& box, double resolution,
                                double tol) {
  box.validate();
  NecessityReport rep;
  rep.box_height = box.t_hi - box.t_lo;
  rep.F_norm = norm_h2(F);
  const AnalyticFunction f = [&F](Complex s) { return F(s); };
  Box b = box;
  for (int attempt = 0;; ++attempt) {
    try {
      const int c = count_zeros(f, b, tol);
      locate(f, b, resolution, tol, c, rep.zeros, 0);
      break;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BoundaryTooClose || attempt >= 4) throw;
      const double grow = 1e-6 * (1 + attempt);
      b = {b.sigma_lo - grow, b.sigma_hi + grow, b.t_lo - grow, b.t_hi + grow};
    }
  }
  for (const auto& z : rep.zeros) rep.blaschke_sum += z.multiplicity * (z.sigma - 0.5);
  return rep;
}

void write_zero_csv(std::ostream& out, const std::vector<ZeroEstimate>& zeros) {
  out << "sigma,t,multiplicity_estimate\n";
  out.precision(17);
  for (const auto& z : zeros) out << z.sigma << ',' << z.t << ',' << z.multiplicity << '\n';
}

}  // namespace dirzero

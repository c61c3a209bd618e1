#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "dirzero/geometry.hpp"

namespace dirzero {

/// Smooth 0 -> 1 transition on [0, 1]: psi(x) = h(x) / (h(x) + h(1-x)), h(x) = e^{-a/x}.
struct RampSample {
  double value;
  double slope;
};
RampSample smooth_ramp(double x, double sharpness);

/// Tensor-product cutoff: 1 on Omega(R-1, 1), 0 off Omega(R, 2), with a sigma-ramp on
/// [3/2, 5/2] and t-ramps on R-1 <= |t| <= R.
class CutoffTheta {
 public:
  struct Sample {
    double value;
    double d_sigma;
    double d_t;
  };

  /// Throws InvalidArgument if R <= 1 or if the ramp sharpness lets |grad Theta| exceed 2.
  explicit CutoffTheta(double R, double sharpness = 0.7);

  double R() const noexcept { return R_; }
  double sharpness() const noexcept { return sharpness_; }
  /// max |grad Theta| measured on a fine grid over the ramp corner at construction.
  double max_gradient() const noexcept { return max_gradient_; }

  Sample operator()(Complex s) const;
  /// dbar Theta = (Theta_sigma + i Theta_t) / 2.
  Complex dbar(Complex s) const;
  bool gradient_nonzero(Complex s) const;

 private:
  double R_;
  double sharpness_;
  double max_gradient_ = 0.0;
};

/// Rectangular-cell quadrature on [sigma_lo, sigma_lo + ns hs] x [t_lo, t_lo + nt ht].
/// Cells may carry an area fraction and centroid offset (for indicator-shaped regions); full
/// cells get exact near-field treatment in the Cauchy transform.
class AreaQuadrature {
 public:
  AreaQuadrature(double sigma_lo, double t_lo, double hs, double ht, std::size_t ns,
                 std::size_t nt);

  /// Cells tiling Omega(R, tau) exactly, with sides as close to h as whole counts allow.
  static AreaQuadrature over(const StripRegion& region, double h);
  /// Disk indicator cells: fractions and centroids from sub x sub sub-sampling per cell.
  static AreaQuadrature disk(Complex center, double radius, double h, int sub = 32);

  double sigma_lo() const noexcept { return sigma_lo_; }
  double t_lo() const noexcept { return t_lo_; }
  double hs() const noexcept { return hs_; }
  double ht() const noexcept { return ht_; }
  std::size_t ns() const noexcept { return ns_; }
  std::size_t nt() const noexcept { return nt_; }
  std::size_t size() const noexcept { return ns_ * nt_; }
  std::size_t index(std::size_t i, std::size_t k) const noexcept { return i * nt_ + k; }

  Complex corner(std::size_t i, std::size_t k) const noexcept {
    return {sigma_lo_ + static_cast<double>(i) * hs_, t_lo_ + static_cast<double>(k) * ht_};
  }
  Complex center(std::size_t i, std::size_t k) const noexcept {
    return corner(i, k) + Complex{0.5 * hs_, 0.5 * ht_};
  }
  /// Quadrature node (cell centroid for partial cells).
  Complex node(std::size_t i, std::size_t k) const noexcept;
  double weight(std::size_t i, std::size_t k) const noexcept;
  bool full(std::size_t i, std::size_t k) const noexcept;
  double total_weight() const noexcept;

  /// Samples g at every node.
  std::vector<Complex> sample(const std::function<Complex(Complex)>& g) const;

 private:
  double sigma_lo_;
  double t_lo_;
  double hs_;
  double ht_;
  std::size_t ns_;
  std::size_t nt_;
  std::vector<double> fraction_;       // empty: all cells full
  std::vector<Complex> centroid_off_;  // empty: nodes at centers
};

/// int_Q dm(w) / (s - w) over the axis-parallel rectangle [corner, corner + hs + i ht].
Complex rect_cauchy_integral(Complex corner, double hs, double ht, Complex s);
/// int_Q conj(w - s) / (w - s) dm(w) over the same rectangle.
Complex rect_conj_ratio_integral(Complex corner, double hs, double ht, Complex s);

/// u(s) = (1/pi) int g(w) / (s - w) dm(w) for g sampled on an AreaQuadrature.
///
/// Midpoint rule on the cells, except cells within two cells of s, which are integrated
/// exactly against the local linear model of g (value plus finite-difference Wirtinger
/// derivatives). Far targets use a multipole expansion about the rectangle center.
class CauchyTransform {
 public:
  CauchyTransform(AreaQuadrature quad, std::vector<Complex> g);

  Complex operator()(Complex s) const;
  Complex direct(Complex s) const;
  Complex multipole(Complex s) const;

  const AreaQuadrature& quadrature() const noexcept { return quad_; }
  std::span<const Complex> samples() const noexcept { return g_; }
  Complex expansion_center() const noexcept { return center_; }
  /// Max distance from the expansion center to the support; multipole used beyond twice it.
  double support_radius() const noexcept { return radius_; }
  /// int g dm.
  Complex total_mass() const noexcept { return moments_.empty() ? Complex{} : moments_[0]; }
  /// k-th moment sum m_j (w_j - center)^k of the cell masses (k < 48).
  Complex moment(std::size_t k) const { return moments_.at(k); }

 private:
  AreaQuadrature quad_;
  std::vector<Complex> g_;
  std::vector<Complex> dg_;     // Wirtinger d/dw
  std::vector<Complex> dbarg_;  // Wirtinger d/dconj(w)
  std::vector<double> node_re_, node_im_, mass_re_, mass_im_;
  std::vector<Complex> moments_;
  Complex center_;
  double radius_ = 0.0;
};

/// Finite-difference residual max |dbar u - g| / (1 + |g|) over the probes, with
/// dbar = (d_sigma + i d_t) / 2 by central differences of step h.
double dbar_residual(const std::function<Complex(Complex)>& u,
                     const std::function<Complex(Complex)>& g, std::span<const Complex> probes,
                     double h);

struct CauchyBoundsReport {
  /// max |u| / (eps log R): the empirical constant of the sup bound.
  double empirical_c = 0.0;
  /// max over exterior probes of |u| pi dist / (area eps); <= 1 by the triangle inequality.
  double far_ratio_area = 0.0;
  /// Same with R in place of the area.
  double far_ratio_R = 0.0;
  std::size_t exterior_probes = 0;
};

/// Checks the two Cauchy-transform bounds for |g| <= eps supported on `region`.
/// FarFieldViolation when |u(s)| > area eps / (pi dist(s, region)) at an exterior probe.
CauchyBoundsReport cauchy_bounds_check(const std::function<Complex(Complex)>& u, double eps,
                                       const StripRegion& region, std::span<const Complex> probes);

/// CSV dump "sigma,t,re_u,im_u" of u on a lattice.
void write_lattice_csv(std::ostream& out, const std::function<Complex(Complex)>& u,
                       std::span<const double> sigmas, std::span<const double> ts);

}  // namespace dirzero

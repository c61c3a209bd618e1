#pragma once

#include <iosfwd>
#include <vector>

#include "dirzero/dirichlet.hpp"
#include "dirzero/geometry.hpp"

namespace dirzero {

/// Closed rectangle [sigma_lo, sigma_hi] x [t_lo, t_hi].
struct Box {
  double sigma_lo;
  double sigma_hi;
  double t_lo;
  double t_hi;

  /// InvalidArgument unless the sides are finite and strictly ordered.
  void validate() const;
};

/// Zeros of f inside the box, with multiplicity, by the argument principle. The boundary is
/// sampled densely and refined wherever consecutive phases differ by more than pi/2.
/// BoundaryTooClose when |f| < tol somewhere on the sampled boundary.
int count_zeros(const AnalyticFunction& f, const Box& box, double tol);
/// Same over the circle |s - center| = radius.
int count_zeros(const AnalyticFunction& f, Complex center, double radius, double tol);

/// Offsets tau in [t_lo, t_hi] (excluding |tau| < 1e-3) where |f(base + i tau)| < tol,
/// located by grid scanning and Brent refinement of the local minima.
std::vector<double> vertical_repetition_scan(const DirichletPolynomial& f, Complex base,
                                             double t_lo, double t_hi, double tol);

struct ZeroEstimate {
  double sigma;
  double t;
  int multiplicity;
};

struct NecessityReport {
  std::vector<ZeroEstimate> zeros;
  double blaschke_sum = 0.0;  // sum (sigma - 1/2) over the zeros, with multiplicity
  double box_height = 0.0;
  double F_norm = 0.0;        // ||F||_{H^2}
};

/// Locates the zeros of F in the box by recursive subdivision (to side `resolution`) and
/// reports their Blaschke sum. Illustrative only: nothing is asserted.
NecessityReport necessity_check(const DirichletPolynomial& F, const Box& box,
                                double resolution = 1e-4, double tol = 1e-12);

/// CSV "sigma,t,multiplicity_estimate".
void write_zero_csv(std::ostream& out, const std::vector<ZeroEstimate>& zeros);

}  // namespace dirzero

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dirzero/dirichlet.hpp"
#include "dirzero/geometry.hpp"
#include "dirzero/laplace.hpp"

namespace dirzero {

/// Exponents of the weighted-grid defect bounds: eta = (2 - gamma(2 + 2^{-alpha})) / gamma
/// for the pointwise bound and nu = 2 / gamma - 2 for the derivative area bound.
struct DefectExponents {
  double eta;
  double nu;
};

/// GammaOutOfRange unless 1/2 < gamma < 1; GammaTooLarge unless eta > 1/2 and nu > 0.
DefectExponents defect_exponents(const SpaceWeight& w, double gamma);

/// Divisor-weighted nodes xi_n, n = N..n_end. Blocks run between anchors xi_{n_j} = j^gamma
/// (n_j the least integer >= e^{j^gamma}); inside a block the steps are proportional to
/// d(n)^{-alpha} (for alpha = infinity: 1 at primes, 0 elsewhere) and close exactly on the
/// next anchor. A partial head block joins log N to the first anchor when they differ.
struct WeightedGrid {
  struct Block {
    double j;                // anchor parameter; the head block carries (log N)^{1/gamma}
    std::size_t first;       // first index in the block
    std::size_t end;         // one past the last index (= next anchor index)
    double xi_start;
    double xi_end;
    long double weight_sum;  // sum of the per-index weights in the block
    double A;                // normalizer so the steps close the block
    bool head;
  };

  double gamma = 0.6;
  SpaceWeight weight = SpaceWeight::finite(1.0);
  std::size_t first_index = 1;
  std::vector<double> nodes;  // nodes[i] = xi_{first_index + i}
  std::vector<Block> blocks;

  /// Largest index n with a cell [xi_n, xi_{n+1}].
  std::size_t last_index() const noexcept { return first_index + nodes.size() - 2; }
  double node(std::size_t n) const { return nodes.at(n - first_index); }
  double lower() const noexcept { return nodes.front(); }
  double upper() const noexcept { return nodes.back(); }
};

/// Grid covering [log N, xi_max]. `d` must reach the final anchor index; the overload
/// without a table builds one.
WeightedGrid build_weighted_grid(const SpaceWeight& w, double gamma, std::size_t N, double xi_max,
                                 const DivisorTable& d);
WeightedGrid build_weighted_grid(const SpaceWeight& w, double gamma, std::size_t N, double xi_max);

/// Index bound needed for build_weighted_grid (the final anchor index).
std::size_t weighted_grid_index_bound(double gamma, std::size_t N, double xi_max);

/// a_n = sqrt(n) int_{xi_n}^{xi_{n+1}} phi. GridMismatch if phi has mass outside the grid.
DirichletPolynomial build_dalpha_coefficients(const GridFunction& phi, const WeightedGrid& grid);

/// ||F||_{D_alpha} / (int |phi|^2 xi^beta)^{1/2}, the empirical constant of the norm bound.
double dalpha_norm_ratio(const DirichletPolynomial& F, const GridFunction& phi,
                         const WeightedGrid& grid, const DivisorTable& d);

struct WeightedDefectReport {
  double eta = 0.0;
  double nu = 0.0;
  /// max |Phi(s)| / (|s-1/2| N^{-sigma+1/2} (log N)^{-eta} ||phi||_{2,beta})
  double pointwise_ratio = 0.0;
  /// int_K |Phi'|^2 (sigma-1/2)^{2^{-alpha}} dm / ((log N)^{-nu} ||phi||_{2,beta}^2)
  double area_ratio = 0.0;
  double area_integral = 0.0;
};

/// Reports the empirical constants of the two weighted-grid defect bounds. The area
/// integral over K uses the midpoint rule with cell size `h`.
WeightedDefectReport weighted_defect_bounds(const GridFunction& phi, const WeightedGrid& grid,
                                            const DirichletPolynomial& F, const StripRegion& K,
                                            std::span<const Complex> samples, double h = 0.05);

}  // namespace dirzero

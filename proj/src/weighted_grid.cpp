#include "dirzero/weighted_grid.hpp"

#include <algorithm>
#include <cmath>

#include "dirzero/error.hpp"

namespace dirzero {

namespace {

std::size_t anchor_index(double j, double gamma) {
  return static_cast<std::size_t>(std::ceil(std::exp(std::pow(j, gamma))));
}

double first_anchor(double logN, double gamma) {
  double j = std::ceil(std::pow(logN, 1.0 / gamma));
  while (std::pow(j, gamma) < logN) j += 1.0;
  while (j > 0.0 && std::pow(j - 1.0, gamma) >= logN) j -= 1.0;
  return j;
}

double index_weight(const SpaceWeight& w, std::uint32_t divisors) {
  if (w.is_infinite()) return divisors == 2 ? 1.0 : 0.0;
  return std::pow(static_cast<double>(divisors), -w.alpha());
}

}  // namespace

DefectExponents defect_exponents(const SpaceWeight& w, double gamma) {
  if (!(gamma > 0.5 && gamma < 1.0)) {
    throw Error(ErrorCode::GammaOutOfRange, "gamma must lie in (1/2, 1)");
  }
  const double tail = w.is_infinite() ? 0.0 : std::exp2(-w.alpha());
  const DefectExponents e{(2.0 - gamma * (2.0 + tail)) / gamma, 2.0 / gamma - 2.0};
  if (!(e.eta > 0.5) || !(e.nu > 0.0)) {
    throw Error(ErrorCode::GammaTooLarge, "gamma too large: eta = " + std::to_string(e.eta) +
                                              ", nu = " + std::to_string(e.nu));
  }
  return e;
}

std::size_t weighted_grid_index_bound(double gamma, std::size_t N, double xi_max) {
  const double logN = std::log(static_cast<double>(std::max<std::size_t>(N, 1)));
  double j = first_anchor(logN, gamma);
  while (std::pow(j, gamma) < xi_max) j += 1.0;
  // Headroom for blocks merged across anchors (alpha = infinity, or empty blocks).
  return anchor_index(j + 4.0, gamma) + 1;
}

WeightedGrid build_weighted_grid(const SpaceWeight& w, double gamma, std::size_t N, double xi_max,
                                 const DivisorTable& d) {
  if (N < 1) throw Error(ErrorCode::InvalidArgument, "N must be >= 1");
  defect_exponents(w, gamma);
  const double beta = w.beta();
  const double logN = std::log(static_cast<double>(N));
  if (!(xi_max > logN)) throw Error(ErrorCode::InvalidArgument, "xi_max must exceed log N");

  WeightedGrid grid;
  grid.gamma = gamma;
  grid.weight = w;
  grid.first_index = N;
  grid.nodes.push_back(logN);

  std::size_t n = N;
  double xi = logN;
  double j_start = std::pow(logN, 1.0 / gamma);
  bool head = true;
  double j = first_anchor(logN, gamma);
  if (std::pow(j, gamma) <= logN && anchor_index(j, gamma) <= N) {
    // log N sits on an anchor: no partial head block.
    head = false;
    j_start = j;
    j += 1.0;
  }

  while (xi < xi_max) {
    // Advance to the next anchor that leaves at least one weighted index in the block.
    std::size_t end = anchor_index(j, gamma);
    long double weight_sum = 0.0L;
    std::size_t scanned = n;
    for (;;) {
      if (end > n) {
        if (!d.covers(end - 1)) {
          throw Error(ErrorCode::InvalidArgument, "divisor table too short for the weighted grid");
        }
        for (; scanned < end; ++scanned) weight_sum += index_weight(w, d(scanned));
        if (weight_sum > 0.0L) break;
      }
      j += 1.0;
      end = anchor_index(j, gamma);
    }
    const double xi_end = std::pow(j, gamma);
    const long double span = static_cast<long double>(xi_end) - xi;

    WeightedGrid::Block block{};
    block.j = j_start;
    block.first = n;
    block.end = end;
    block.xi_start = xi;
    block.xi_end = xi_end;
    block.weight_sum = weight_sum;
    block.head = head;
    block.A = (j_start > 0.0)
                  ? static_cast<double>(span * std::exp(std::pow(j_start, gamma)) *
                                        std::pow(j_start, -gamma * beta) / weight_sum)
                  : 0.0;
    grid.blocks.push_back(block);

    long double acc = xi;
    for (std::size_t m = n; m < end; ++m) {
      acc += span * index_weight(w, d(m)) / weight_sum;
      grid.nodes.push_back(static_cast<double>(acc));
    }
    grid.nodes.back() = xi_end;

    n = end;
    xi = xi_end;
    j_start = j;
    head = false;
    j += 1.0;
  }
  return grid;
}

WeightedGrid build_weighted_grid(const SpaceWeight& w, double gamma, std::size_t N,
                                 double xi_max) {
  defect_exponents(w, gamma);
  const DivisorTable d(weighted_grid_index_bound(gamma, N, xi_max));
  return build_weighted_grid(w, gamma, N, xi_max, d);
}

DirichletPolynomial build_dalpha_coefficients(const GridFunction& phi, const WeightedGrid& grid) {
  if (grid.nodes.size() < 2) throw Error(ErrorCode::GridMismatch, "empty weighted grid");
  const double tol = 1e-12 * (1.0 + grid.upper());
  if (phi.support_lower() < grid.lower() - tol || phi.support_upper() > grid.upper() + tol) {
    throw Error(ErrorCode::GridMismatch, "density support is not covered by the weighted grid");
  }
  const auto integrals = phi.integrate_partition(grid.nodes);
  std::vector<Complex> coeffs(grid.last_index());
  for (std::size_t i = 0; i < integrals.size(); ++i) {
    const std::size_t n = grid.first_index + i;
    coeffs[n - 1] = std::sqrt(static_cast<double>(n)) * integrals[i];
  }
  return DirichletPolynomial(std::move(coeffs), grid.first_index);
}

double dalpha_norm_ratio(const DirichletPolynomial& F, const GridFunction& phi,
                         const WeightedGrid& grid, const DivisorTable& d) {
  const double denom = phi.power_weighted_norm(grid.weight.beta());
  if (denom == 0.0) return 0.0;
  return norm_dalpha(F, grid.weight, d) / denom;
}

WeightedDefectReport weighted_defect_bounds(const GridFunction& phi, const WeightedGrid& grid,
                                            const DirichletPolynomial& F, const StripRegion& K,
                                            std::span<const Complex> samples, double h) {
  WeightedDefectReport report;
  const auto ex = defect_exponents(grid.weight, grid.gamma);
  report.eta = ex.eta;
  report.nu = ex.nu;
  const std::size_t N = grid.first_index;
  if (N < 2) throw Error(ErrorCode::InvalidArgument, "weighted defect bounds need N >= 2");
  const double logN = std::log(static_cast<double>(N));
  const double beta = grid.weight.beta();
  const double norm = phi.power_weighted_norm(beta);
  if (norm == 0.0) return report;

  for (const Complex& s : samples) {
    const double scale = std::abs(s - 0.5) * std::pow(static_cast<double>(N), -s.real() + 0.5) *
                         std::pow(logN, -ex.eta) * norm;
    if (scale > 0.0) {
      report.pointwise_ratio = std::max(report.pointwise_ratio, std::abs(defect(phi, F, s)) / scale);
    }
  }

  const auto ns = static_cast<std::size_t>(std::ceil(K.tau() / h));
  const auto nt = static_cast<std::size_t>(std::ceil(2.0 * K.R() / h));
  const double hs = K.tau() / static_cast<double>(ns);
  const double ht = 2.0 * K.R() / static_cast<double>(nt);
  std::vector<double> sigmas(ns);
  for (std::size_t i = 0; i < ns; ++i) sigmas[i] = 0.5 + (static_cast<double>(i) + 0.5) * hs;
  const double t0 = -K.R() + 0.5 * ht;
  const auto lap = laplace_lattice(phi, sigmas, t0, ht, nt, 1);
  const auto dir = evaluate_lattice(F, sigmas, t0, ht, nt, 1);
  const double power = grid.weight.is_infinite() ? 0.0 : std::exp2(-grid.weight.alpha());
  long double area = 0.0L;
  for (std::size_t i = 0; i < ns; ++i) {
    const double wgt = std::pow(sigmas[i] - 0.5, power);
    for (std::size_t k = 0; k < nt; ++k) {
      area += std::norm(lap[i * nt + k] - dir[i * nt + k]) * wgt;
    }
  }
  report.area_integral = static_cast<double>(area) * hs * ht;
  report.area_ratio = report.area_integral / (std::pow(logN, -ex.nu) * norm * norm);
  return report;
}

}  // namespace dirzero

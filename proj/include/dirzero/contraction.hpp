#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dirzero/dbar.hpp"
#include "dirzero/dirichlet.hpp"
#include "dirzero/divisor.hpp"
#include "dirzero/geometry.hpp"
#include "dirzero/laplace.hpp"
#include "dirzero/weighted_grid.hpp"

namespace dirzero {

/// E_N(s) = N^{-s+1/2}.
class ExponentialShift {
 public:
  explicit ExponentialShift(std::size_t N);
  std::size_t N() const noexcept { return N_; }
  double log_N() const noexcept { return log_N_; }
  Complex operator()(Complex s) const { return std::exp(-(s - 0.5) * log_N_); }

 private:
  std::size_t N_;
  double log_N_;
};

/// Target space: H^2 (no weight) or D_alpha with the divisor weight.
struct SpaceMode {
  std::optional<SpaceWeight> weight;

  static SpaceMode h2() { return {}; }
  static SpaceMode dalpha(SpaceWeight w) { return {w}; }
  bool is_h2() const noexcept { return !weight.has_value(); }
  /// Exponent of the density-side weight (1 + xi^beta); 0 in H^2 mode.
  double beta() const noexcept { return weight ? weight->beta() : 0.0; }
  std::string name() const;
};

struct ConstructionConfig {
  double R = 5.0;
  double gamma = 0.6;
  SpaceMode mode = SpaceMode::h2();
  double rho_target = 0.5;
  double eps_stop = 1e-6;      // relative to ||F_0||
  double eps_vanish = 1e-3;    // relative to ||F||
  double eps_interp = 1e-3;    // relative to the target norm
  double quad_h = 0.05;        // Cauchy-transform cell size
  double ramp_sharpness = 0.7;
  double divisor_threshold = 1e-3;
  std::uint64_t seed = 1;
  std::size_t N_start = 16;
  std::size_t N_cap = 1024;
  double xi_span = 6.0;        // density support [log N, log N + xi_span]
  double xi_step = 0.02;       // density cell width
  double h_line = 0.05;        // inversion line sigma_0 = 1/2 + h_line
  double t_max = 400.0;        // inversion line truncation
  double dt_line = 0.02;       // inversion line step
  int trials = 3;              // random starts for the contraction estimate
  int power_steps = 3;         // T-applications per start
  int max_iterations = 80;
};

/// One application of T_N, before the constraint projection.
struct Application {
  DirichletPolynomial F;                // coefficients read off the input density
  GridFunction image;                   // density of T_N f on [log N, log N + span]
  std::vector<Complex> targets;         // Phi^{(r)}(s_k), the values T_N f must take on S
  std::vector<Complex> image_values;    // Laplace^{(r)}(image)(s_k) before projection
  double inversion_defect = 0.0;        // max |image_values - targets|
  double mass_below = 0.0;              // ||density|| on [log N - 1, log N] (should be ~0)
  double spill = 0.0;                   // ||density|| on [upper, upper + 1] (discarded)
};

/// T_N f = Theta Phi - G E_N u with u the Cauchy transform of dbar(Theta) Phi / (G E_N),
/// G the Blaschke product of S. Densities live on a uniform grid over
/// [log N, log N + xi_span].
class TOperator {
 public:
  /// SupportViolation if S is not inside Omega(R-2, 1/2); DivisorTooSmall if
  /// inf |B| over the support of grad Theta is below the threshold.
  TOperator(PointSequence S, std::size_t N, const ConstructionConfig& cfg);

  std::size_t N() const noexcept { return shift_.N(); }
  const ExponentialShift& shift() const noexcept { return shift_; }
  const CutoffTheta& theta() const noexcept { return theta_; }
  const BlaschkeProduct& blaschke() const noexcept { return B_; }
  const PointSequence& sequence() const noexcept { return S_; }
  const ConstructionConfig& config() const noexcept { return cfg_; }
  double min_divisor() const noexcept { return min_divisor_; }
  /// Total multiplicity of S, the number of interpolation constraints.
  std::size_t constraint_count() const noexcept { return constraint_count_; }

  /// Fresh zero density on the working grid.
  GridFunction zero_density() const;

  /// Coefficients of f in the target space. `first_index` is N, or 1 for a density that
  /// starts at 0 (first interpolation step).
  DirichletPolynomial coefficients(const GridFunction& phi, std::size_t first_index) const;
  /// Norm of a density in the mode (L^2, or the (1 + xi^beta)-weighted norm).
  double density_norm(const GridFunction& phi) const;
  /// Norm of a Dirichlet polynomial in the target space.
  double series_norm(const DirichletPolynomial& F) const;

  Application apply(const GridFunction& phi, std::size_t first_index) const;

  /// T_N f as a pointwise callable (for analyticity checks and probes).
  std::function<Complex(Complex)> image_function(const GridFunction& phi,
                                                 std::size_t first_index) const;

  /// f^{(r)}(s_k) for all constraints, in sequence order.
  std::vector<Complex> constraint_values(const GridFunction& phi) const;
  /// Minimal-norm cell correction making constraint_values(phi) == targets.
  void project(GridFunction& phi, const std::vector<Complex>& targets) const;

 private:
  PointSequence S_;
  ExponentialShift shift_;
  ConstructionConfig cfg_;
  CutoffTheta theta_;
  BlaschkeProduct B_;
  AreaQuadrature quad_;
  std::vector<std::uint8_t> active_;  // per cell: grad Theta != 0 at the node
  std::vector<Complex> dbar_theta_;   // per cell
  std::size_t constraint_count_ = 0;
  double min_divisor_ = 1.0;
  std::shared_ptr<const DivisorTable> divisors_;
  std::shared_ptr<const WeightedGrid> grid_;      // coefficient grid from N
  mutable std::shared_ptr<const WeightedGrid> grid_from_one_;
  mutable std::shared_ptr<const DivisorTable> divisors_from_one_;

  struct Pieces;
  Pieces build_pieces(const GridFunction& phi, std::size_t first_index) const;
  const WeightedGrid& grid_for(std::size_t first_index, double xi_max) const;
};

/// Density of B E_N / (s + 1/2) (B == 1 when S is empty) on the working grid of T.
GridFunction starting_density(const TOperator& T);

/// Randomized lower estimate of ||T_N|| on E_N H^2 (or its D_beta analogue): max of
/// ||T f|| / ||f|| over `trials` random densities, each followed through `power_steps`
/// applications. Deterministic in `seed`.
struct ContractionEstimate {
  double rho = 0.0;
  std::vector<double> samples;  // every ratio seen
};
ContractionEstimate estimate_contraction(const TOperator& T, int trials, int power_steps,
                                         std::uint64_t seed);
/// Single ratio ||T f|| / ||f||.
double contraction_ratio(const TOperator& T, const GridFunction& phi);

struct IterationRecord {
  int j = 0;
  double F_norm = 0.0;            // ||F_j|| in the target space
  double F_at_three_halves = 0.0; // |F_j(3/2)|
  double density_norm = 0.0;      // ||f_j||
  double residual = 0.0;          // max_k |(F_0 + .. + F_j + f_{j+1} - target)^{(r)}(s_k)|
  double inversion_defect = 0.0;  // before projection
  double mass_below = 0.0;
  double spill = 0.0;
};

struct IterationCertificate {
  std::string mode;
  std::string kind;  // "vanishing" or "interpolation"
  std::size_t N = 0;
  double rho_hat = 0.0;
  std::vector<std::pair<std::size_t, double>> N_sweep;  // (N, rho_hat) tried
  double min_divisor = 0.0;
  double first_step_ratio = 0.0;  // ||f_1|| / ||f_0|| (interpolation only)
  double start_norm = 0.0;        // ||f_0|| before and after projection
  double start_norm_projected = 0.0;
  std::vector<IterationRecord> records;
  double F_norm = 0.0;
  double F_at_three_halves = 0.0;
  double head_value = 0.0;        // |F_0(3/2)|
  double tail_sum = 0.0;          // sum_{j >= 1} |F_j(3/2)|
  double max_residual = 0.0;      // max_k |F^{(r)}(s_k) - target^{(r)}(s_k)|
  double max_step_ratio = 0.0;    // max_{j >= 1} ||F_{j+1}|| / ||F_j||
  bool converged = false;
  bool nontrivial = false;
  bool geometric = false;
  bool vanishing = false;
  bool certified = false;
};

struct ConstructionResult {
  DirichletPolynomial F;
  IterationCertificate cert;
};

/// Picks N by doubling from N_start until the estimate drops below rho_target
/// (NoContraction past N_cap), runs the iteration from f_0 = B E_N / (s + 1/2) and certifies
/// nontriviality (NontrivialityFailed otherwise) and vanishing on S.
ConstructionResult construct_vanishing(const PointSequence& S, const ConstructionConfig& cfg);

/// Same iteration started from f_0 = target (density on [0, upper]); F agrees with the
/// target on S.
ConstructionResult interpolate_on_sequence(const PointSequence& S, const GridFunction& target,
                                           const ConstructionConfig& cfg);

/// Runs the iteration at a fixed N (no N search, no nontriviality exception).
ConstructionResult run_iteration(const TOperator& T, const GridFunction* target);

/// Picks N for the configuration; returns the operator and fills the sweep record.
std::unique_ptr<TOperator> select_operator(const PointSequence& S, const ConstructionConfig& cfg,
                                           IterationCertificate& cert);

/// s -> B_disk(2^{-s}), B_disk the disk Blaschke product with zeros 2^{-sigma_j - i t_j}.
/// Vanishes on S and is bounded by 1 on Re s > 0. InvalidSequence unless every sigma_j > 0.
AnalyticFunction construct_hinfty_vanishing(std::span<const SequencePoint> S);

}  // namespace dirzero

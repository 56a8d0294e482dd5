#pragma once

// Dimension-estimation engine: box counting under pluggable metrics,
// critical exponent from orbital counting (two estimators), truncated
// Patterson-Sullivan sampling, pointwise/fiber/transverse estimators,
// and the spherical-vs-Gromov dimension band checker.

#include <chdim/schottky.hpp>

namespace chdim {

// Tagged metrics for counting. heisenberg/gromov count in the boundary
// chart with the chart gauge (group-translate cells, dilation-adapted);
// euclidean uses the flat chart coordinates; spherical the unit-sphere
// chart in R^{2n}.
enum class MetricKind { heisenberg, euclidean, spherical, gromov };

const char* to_string(MetricKind m);
MetricKind metric_from_string(const std::string& s);

struct DimEstimate {
  double slope = 0;
  double stderr_ = 0;
  std::vector<std::pair<double, std::uint64_t>> scales;  // (eps, N(eps))
  int window_lo = 0, window_hi = 0;  // [lo, hi) indices of the fitted window
  MetricKind metric = MetricKind::euclidean;
  // every admissible window, with its slope and fit rms
  struct WindowFit {
    int lo = 0, hi = 0;
    double slope = 0, stderr_ = 0, rms = 0;
  };
  std::vector<WindowFit> windows;
};

struct BoxCountConfig {
  double base_scale = 0.5;  // coarsest cell size
  int levels = 10;          // dyadic scales base, base/2, ..., base/2^{levels-1}
  int min_window = 6;       // plateau windows must have >= this many scales
  int threads = 1;
};

// Cloud views: (heis, weights) or raw coordinate arrays. Weights may be
// empty (counts only need support).
DimEstimate box_count(const PointCloud& cloud, MetricKind metric,
                      const BoxCountConfig& cfg);

// direct variant on explicit chart coordinates (used by calibration tests)
DimEstimate box_count_heis(const std::vector<HeisPoint>& pts, bool chart_gauge,
                           const BoxCountConfig& cfg);
DimEstimate box_count_euclid(const std::vector<HeisPoint>& pts, const BoxCountConfig& cfg);
DimEstimate box_count_spherical(const std::vector<VecC>& sph, const BoxCountConfig& cfg);

// Greedy eps-net covering numbers under the true boundary Gromov metric;
// O(N * net) per scale, cross-validates the chart-mode estimate. Caps the
// cloud at `max_points` (deterministic prefix).
DimEstimate gromov_pairwise_dims(const PointCloud& cloud, const IwasawaFrame& F,
                                 const BoxCountConfig& cfg, std::size_t max_points = 20000);

// --- critical exponent --------------------------------------------------------

struct ExponentEstimate {
  double delta_counting = 0;  // slope of log N(R) vs R
  double delta_series = 0;    // increment-ratio abscissa (bisection)
  double r_lo = 0, r_hi = 0;  // counting window
  int word_length = 0;
};

// `distances` must be in enumeration order (identity first; by length, then
// lexicographic) so that per-length segments follow the free-group counting
// formula for k generators.
ExponentEstimate critical_exponent(const std::vector<double>& distances, int L, int k);

// --- Patterson-Sullivan sampling ----------------------------------------------

struct WeightedCloud {
  std::vector<BoundaryPoint> points;
  std::vector<HeisPoint> heis;
  std::vector<VecC> sph;
  std::vector<double> weights;  // normalized to sum 1
  double exponent = 0;
};

// Atoms at attracting fixed points of words of length 1..L, weights
// proportional to e^{-s d(o, gamma o)}.
WeightedCloud ps_sample(const SchottkyDescriptor& S, int L, double s, const IwasawaFrame& F);

// uniform weights over an unweighted cloud
WeightedCloud uniform_weighted(const PointCloud& cloud);

// --- pointwise dimension --------------------------------------------------------

struct PointwiseConfig {
  int centers = 64;
  int radii = 14;             // geometric radius grid
  double radius_ratio = 0.7;  // consecutive radius factor
  double max_radius = 0;      // 0: cloud diameter / 2
  double min_mass = 0;        // 0: 10 / atom count
  std::uint64_t seed = 17;
  int threads = 1;
};

struct PointwiseEstimate {
  double median = 0;
  double iqr = 0;
  int centers_used = 0;
  int centers_skipped = 0;
};

PointwiseEstimate pointwise_dim(const WeightedCloud& cloud, MetricKind metric,
                                const PointwiseConfig& cfg);

// --- fiber / transverse ---------------------------------------------------------

struct FiberTransverse {
  PointwiseEstimate fiber;       // conditional vertical dimension (gauge scaling)
  PointwiseEstimate transverse;  // projected measure in N/Z
  double dim_full = 0;           // chart-gauge pointwise dimension of the cloud
  double ly_residual = 0;        // |dim_full - fiber - transverse|
  double slab_width = 0;
  int slabs_used = 0;
};

struct FiberConfig {
  int min_slabs = 30;
  int min_atoms_per_slab = 200;
  int radii = 16;
  double radius_ratio = 0.65;
  std::uint64_t seed = 23;
  int threads = 1;
};

FiberTransverse fiber_transverse_dims(const WeightedCloud& cloud, const FiberConfig& cfg);

// --- dimension band -------------------------------------------------------------

struct BaloghReport {
  bool pass = false;
  // slack of each inequality (nonnegative means satisfied):
  double lower_alpha = 0;     // beta - alpha
  double lower_codim = 0;     // beta - (2 alpha - 2n)
  double upper_double = 0;    // 2 alpha - beta
  double upper_plus_one = 0;  // alpha + 1 - beta
};

// max{a, 2a-2n} <= b <= min{2a, a+1}, with slack
BaloghReport balogh_check(double alpha_spherical, double beta_gromov, int n,
                          double slack = 0.1);

}  // namespace chdim

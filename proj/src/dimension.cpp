#include <chdim/dimension.hpp>

#include <unordered_set>

namespace chdim {

const char* to_string(MetricKind m) {
  switch (m) {
    case MetricKind::heisenberg: return "heisenberg";
    case MetricKind::euclidean: return "euclidean";
    case MetricKind::spherical: return "spherical";
    default: return "gromov";
  }
}

MetricKind metric_from_string(const std::string& s) {
  if (s == "heisenberg") return MetricKind::heisenberg;
  if (s == "euclidean") return MetricKind::euclidean;
  if (s == "spherical") return MetricKind::spherical;
  if (s == "gromov") return MetricKind::gromov;
  throw input_error("unknown metric tag: " + s);
}

// --- occupancy counting --------------------------------------------------------

namespace {

std::uint64_t hash_cells(const std::vector<std::int64_t>& idx) {
  return fnv1a(idx.data(), idx.size() * sizeof(std::int64_t));
}

// occupied-cell count for one scale given a per-point cell-index functor
template <class CellFn>
std::uint64_t occupied_cells(std::size_t npoints, int threads, CellFn&& cell_of) {
  const std::size_t nblocks = (npoints + kParallelBlock - 1) / kParallelBlock;
  std::vector<std::unordered_set<std::uint64_t>> partial(nblocks);
  parallel_blocks(npoints, threads, [&](std::size_t b, std::size_t lo, std::size_t hi) {
    auto& set = partial[b];
    std::vector<std::int64_t> idx;
    for (std::size_t i = lo; i < hi; ++i) {
      cell_of(i, idx);
      set.insert(hash_cells(idx));
    }
  });
  std::unordered_set<std::uint64_t> all;
  for (auto& s : partial) all.insert(s.begin(), s.end());
  return all.size();
}

double slope_fit(const std::vector<double>& x, const std::vector<double>& y, int lo, int hi,
                 double* stderr_out, double* rms_out) {
  int n = hi - lo;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = lo; i < hi; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double denom = n * sxx - sx * sx;
  double slope = (n * sxy - sx * sy) / denom;
  double icept = (sy - slope * sx) / n;
  double rss = 0;
  for (int i = lo; i < hi; ++i) {
    double r = y[i] - (slope * x[i] + icept);
    rss += r * r;
  }
  double var = n > 2 ? rss / (n - 2) : 0.0;
  if (stderr_out) *stderr_out = std::sqrt(var * n / std::max(1e-300, denom));
  if (rms_out) *rms_out = std::sqrt(rss / n);
  return slope;
}

DimEstimate fit_counts(std::vector<std::pair<double, std::uint64_t>> scales,
                       MetricKind metric, int min_window, std::size_t npoints) {
  DimEstimate est;
  est.metric = metric;
  est.scales = std::move(scales);
  const int n = int(est.scales.size());
  std::uint64_t cmax = 0, cmin = UINT64_MAX;
  for (auto& [e, c] : est.scales) {
    cmax = std::max(cmax, c);
    cmin = std::min(cmin, c);
  }
  if (cmax <= 1)
    throw estimation_error("box_count: degenerate cloud (single occupied cell everywhere)");

  std::vector<double> x(n), y(n);
  for (int i = 0; i < n; ++i) {
    x[i] = -std::log(est.scales[i].first);
    y[i] = std::log(double(est.scales[i].second));
  }
  // admissible scales: below half the cloud the counts saturate toward the
  // point count and the slope decays to zero; a saturated tail must not win
  // the plateau selection
  const double count_cap = 0.5 * double(npoints);
  // plateau selection: every admissible window of >= min_window scales
  // covering >= one decade; keep them all, pick the minimal-rms one
  double best_rms = std::numeric_limits<double>::infinity();
  for (int lo = 0; lo < n; ++lo)
    for (int hi = lo + min_window; hi <= n; ++hi) {
      if (x[hi - 1] - x[lo] < std::log(10.0)) continue;
      bool admissible = true;
      for (int i = lo; i < hi; ++i)
        if (double(est.scales[i].second) > count_cap) admissible = false;
      if (!admissible) continue;
      DimEstimate::WindowFit wf;
      wf.lo = lo;
      wf.hi = hi;
      wf.slope = slope_fit(x, y, lo, hi, &wf.stderr_, &wf.rms);
      est.windows.push_back(wf);
      if (wf.rms < best_rms) {
        best_rms = wf.rms;
        est.window_lo = lo;
        est.window_hi = hi;
        est.slope = wf.slope;
        est.stderr_ = wf.stderr_;
      }
    }
  if (est.windows.empty())
    throw estimation_error("box_count: scale range too short for a one-decade window");
  return est;
}

std::vector<double> dyadic_scales(const BoxCountConfig& cfg) {
  if (cfg.levels < 2) throw input_error("box_count: need at least two scales");
  std::vector<double> s(cfg.levels);
  for (int i = 0; i < cfg.levels; ++i) s[i] = cfg.base_scale * std::pow(0.5, i);
  return s;
}

// chart-gauge cell index: group translates of the dilated unit box.
// chart_gauge = true: left-translate tiles (t + Im<v, eps j>), the gauge the
// boundary chart carries; false: right-translate tiles (t - Im<v, eps j>).
void heis_cell(const HeisPoint& h, double eps, bool chart_gauge,
               std::vector<std::int64_t>& idx) {
  const int m = int(h.v.size());
  idx.resize(2 * m + 1);
  cplx shear(0, 0);
  for (int i = 0; i < m; ++i) {
    double re = h.v(i).real(), im = h.v(i).imag();
    std::int64_t jre = std::int64_t(std::floor(re / eps));
    std::int64_t jim = std::int64_t(std::floor(im / eps));
    idx[2 * i] = jre;
    idx[2 * i + 1] = jim;
    cplx vj(double(jre) * eps, double(jim) * eps);
    shear += std::conj(h.v(i)) * vj;  // <v, vj> summand
  }
  double twist = shear.imag();  // Im<v, vj>
  double tau = chart_gauge ? h.t + twist : h.t - twist;
  idx[2 * m] = std::int64_t(std::floor(tau / (eps * eps)));
}

}  // namespace

DimEstimate box_count_heis(const std::vector<HeisPoint>& pts, bool chart_gauge,
                           const BoxCountConfig& cfg) {
  if (pts.size() < 2) throw estimation_error("box_count: too few points");
  std::vector<std::pair<double, std::uint64_t>> counts;
  for (double eps : dyadic_scales(cfg)) {
    std::uint64_t c = occupied_cells(pts.size(), cfg.threads,
                                     [&](std::size_t i, std::vector<std::int64_t>& idx) {
                                       heis_cell(pts[i], eps, chart_gauge, idx);
                                     });
    counts.emplace_back(eps, c);
  }
  return fit_counts(std::move(counts),
                    chart_gauge ? MetricKind::gromov : MetricKind::heisenberg,
                    cfg.min_window, pts.size());
}

DimEstimate box_count_euclid(const std::vector<HeisPoint>& pts, const BoxCountConfig& cfg) {
  if (pts.size() < 2) throw estimation_error("box_count: too few points");
  std::vector<std::pair<double, std::uint64_t>> counts;
  for (double eps : dyadic_scales(cfg)) {
    std::uint64_t c = occupied_cells(
        pts.size(), cfg.threads, [&](std::size_t i, std::vector<std::int64_t>& idx) {
          const HeisPoint& h = pts[i];
          const int m = int(h.v.size());
          idx.resize(2 * m + 1);
          for (int j = 0; j < m; ++j) {
            idx[2 * j] = std::int64_t(std::floor(h.v(j).real() / eps));
            idx[2 * j + 1] = std::int64_t(std::floor(h.v(j).imag() / eps));
          }
          idx[2 * m] = std::int64_t(std::floor(h.t / eps));
        });
    counts.emplace_back(eps, c);
  }
  return fit_counts(std::move(counts), MetricKind::euclidean, cfg.min_window, pts.size());
}

DimEstimate box_count_spherical(const std::vector<VecC>& sph, const BoxCountConfig& cfg) {
  if (sph.size() < 2) throw estimation_error("box_count: too few points");
  std::vector<std::pair<double, std::uint64_t>> counts;
  for (double eps : dyadic_scales(cfg)) {
    std::uint64_t c = occupied_cells(
        sph.size(), cfg.threads, [&](std::size_t i, std::vector<std::int64_t>& idx) {
          const VecC& w = sph[i];
          const int m = int(w.size());
          idx.resize(2 * m);
          for (int j = 0; j < m; ++j) {
            idx[2 * j] = std::int64_t(std::floor(w(j).real() / eps));
            idx[2 * j + 1] = std::int64_t(std::floor(w(j).imag() / eps));
          }
        });
    counts.emplace_back(eps, c);
  }
  return fit_counts(std::move(counts), MetricKind::spherical, cfg.min_window, sph.size());
}

DimEstimate box_count(const PointCloud& cloud, MetricKind metric, const BoxCountConfig& cfg) {
  if (cloud.points.size() < 1000)
    throw estimation_error("box_count: need at least 1e3 points");
  switch (metric) {
    case MetricKind::spherical:
      return box_count_spherical(cloud.sph, cfg);
    case MetricKind::euclidean: {
      for (const auto& h : cloud.heis)
        if (h.inf) throw domain_error("box_count: cloud meets the chart point at infinity");
      return box_count_euclid(cloud.heis, cfg);
    }
    case MetricKind::heisenberg:
    case MetricKind::gromov: {
      for (const auto& h : cloud.heis)
        if (h.inf) throw domain_error("box_count: cloud meets the chart point at infinity");
      DimEstimate est = box_count_heis(cloud.heis, /*chart_gauge=*/true, cfg);
      est.metric = metric;
      return est;
    }
  }
  throw input_error("box_count: bad metric");
}

DimEstimate gromov_pairwise_dims(const PointCloud& cloud, const IwasawaFrame& F,
                                 const BoxCountConfig& cfg, std::size_t max_points) {
  std::size_t n = std::min(cloud.points.size(), max_points);
  if (n < 100) throw estimation_error("gromov_pairwise_dims: too few points");
  GromovMetricTag tag{F.origin};
  std::vector<std::pair<double, std::uint64_t>> counts;
  for (double eps : dyadic_scales(cfg)) {
    // greedy eps-net: covering-number proxy for N(eps)
    std::vector<std::size_t> net;
    for (std::size_t i = 0; i < n; ++i) {
      bool covered = false;
      for (std::size_t c : net) {
        if (projective_distance(cloud.points[i], cloud.points[c]) < tol().projective_eq) {
          covered = true;
          break;
        }
        if (gromov_dist(tag, cloud.points[i], cloud.points[c], F.space) <= eps) {
          covered = true;
          break;
        }
      }
      if (!covered) net.push_back(i);
    }
    counts.emplace_back(eps, net.size());
  }
  return fit_counts(std::move(counts), MetricKind::gromov, cfg.min_window, n);
}

// --- critical exponent ----------------------------------------------------------

ExponentEstimate critical_exponent(const std::vector<double>& distances, int L, int k) {
  if (distances.size() < 1000)
    throw estimation_error("critical_exponent: need at least 1e3 distances");
  if (distances.size() != reduced_word_count_upto(k, L))
    throw input_error("critical_exponent: multiset size does not match (k, L)");

  ExponentEstimate est;
  est.word_length = L;

  // counting estimator: slope of log N(R) against R
  std::vector<double> sorted = distances;
  std::sort(sorted.begin(), sorted.end());
  double rmax = sorted.back();
  est.r_lo = 0.2 * rmax;
  est.r_hi = 0.9 * rmax;
  const int grid = 33;
  std::vector<double> xs, ys;
  for (int i = 0; i < grid; ++i) {
    double r = est.r_lo + (est.r_hi - est.r_lo) * double(i) / double(grid - 1);
    auto it = std::upper_bound(sorted.begin(), sorted.end(), r);
    std::size_t cnt = std::size_t(it - sorted.begin());
    if (cnt == 0) continue;
    xs.push_back(r);
    ys.push_back(std::log(double(cnt)));
  }
  if (xs.size() < 8 || ys.back() <= ys.front())
    throw estimation_error("critical_exponent: orbital counts do not grow over the window");
  double se, rms;
  {
    std::vector<double> x = xs, y = ys;
    est.delta_counting = slope_fit(x, y, 0, int(x.size()), &se, &rms);
  }

  // series estimator: smallest s with unit per-length increment ratio,
  // comparing truncations at L and L-2
  if (L < 4) throw estimation_error("critical_exponent: L must be >= 4 for the series route");
  std::vector<std::pair<std::size_t, std::size_t>> seg(L + 1);  // [begin,end) per length
  std::size_t pos = 0;
  for (int l = 0; l <= L; ++l) {
    std::size_t c = reduced_word_count_exact(k, l);
    seg[l] = {pos, pos + c};
    pos += c;
  }
  auto increment = [&](int l, double s) {
    double m = 0;
    for (std::size_t i = seg[l].first; i < seg[l].second; ++i)
      m = std::max(m, -s * distances[i]);
    double acc = 0;
    for (std::size_t i = seg[l].first; i < seg[l].second; ++i)
      acc += std::exp(-s * distances[i] - m);
    return std::log(acc) + m;  // log sum_{|w|=l} e^{-s d_w}
  };
  auto ratio_log = [&](double s) {
    // (I_L / I_{L-2})^{1/2} in logs
    return 0.5 * (increment(L, s) - increment(L - 2, s));
  };
  double lo = 0.0, hi = 2.0 * k + 4.0;
  if (ratio_log(lo) < 0)
    throw estimation_error("critical_exponent: series already subcritical at s = 0");
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    if (ratio_log(mid) > 0) lo = mid;
    else hi = mid;
  }
  est.delta_series = 0.5 * (lo + hi);
  return est;
}

// --- Patterson-Sullivan ----------------------------------------------------------

WeightedCloud ps_sample(const SchottkyDescriptor& D, int L, double s, const IwasawaFrame& F) {
  const HermitianSpace& S = F.space;
  if (L < 1) throw input_error("ps_sample: L must be >= 1");
  if (!D.verification.all())
    throw input_error("ps_sample: descriptor is not fully verified");
  WeightedCloud out;
  out.exponent = s;

  // atoms in enumeration order (by length, then lexicographic), matching
  // orbit_distances
  std::vector<std::vector<BoundaryPoint>> pts_by_len(L + 1);
  std::vector<std::vector<double>> logw_by_len(L + 1);

  std::vector<GroupElement> stack;
  stack.emplace_back(GroupElement(MatC::Identity(S.dim(), S.dim())));

  std::function<void(int, int8_t)> rec = [&](int depth, int8_t last) {
    if (depth == L) return;
    int8_t forbidden = last == 0 ? int8_t(0) : letter_inverse(last);
    for (int id = 0; id < 2 * D.k; ++id) {
      int8_t letter = id_letter(id);
      if (letter == forbidden) continue;
      stack.push_back(
          normalize_isometry(group_mul(stack.back(), D.letter_element(letter, S)), S));
      try {
        BoundaryPoint p = fixed_boundary_points(stack.back(), S).attracting;
        double d = dist(F.origin, interior_act(stack.back(), F.origin, S), S);
        pts_by_len[depth + 1].push_back(std::move(p));
        logw_by_len[depth + 1].push_back(-s * d);
      } catch (const std::exception&) {
        // conditioning failure: skip the word
      }
      rec(depth + 1, letter);
      stack.pop_back();
    }
  };
  rec(0, 0);

  std::vector<double> logw;
  for (int l = 1; l <= L; ++l) {
    for (auto& p : pts_by_len[l]) out.points.push_back(std::move(p));
    for (double w : logw_by_len[l]) logw.push_back(w);
  }
  if (out.points.empty()) throw estimation_error("ps_sample: no usable words");
  double m = *std::max_element(logw.begin(), logw.end());
  double total = 0;
  out.weights.resize(logw.size());
  for (std::size_t i = 0; i < logw.size(); ++i) {
    out.weights[i] = std::exp(logw[i] - m);
    total += out.weights[i];
  }
  if (!(total > 0)) throw estimation_error("ps_sample: weights underflowed");
  for (double& w : out.weights) w /= total;

  out.heis.reserve(out.points.size());
  out.sph.reserve(out.points.size());
  for (const BoundaryPoint& p : out.points) {
    out.heis.push_back(F.to_heis(p));
    out.sph.push_back(spherical_chart(p));
  }
  return out;
}

WeightedCloud uniform_weighted(const PointCloud& cloud) {
  WeightedCloud out;
  out.points = cloud.points;
  out.heis = cloud.heis;
  out.sph = cloud.sph;
  out.weights.assign(cloud.points.size(), 1.0 / double(cloud.points.size()));
  return out;
}

// --- pointwise dimension ----------------------------------------------------------

namespace {

// sample `count` atom indices by weight (deterministic)
std::vector<std::size_t> weighted_centers(const std::vector<double>& w, int count, Rng rng) {
  std::vector<double> cum(w.size());
  double acc = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += w[i];
    cum[i] = acc;
  }
  std::vector<std::size_t> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    double u = rng.uniform() * acc;
    out.push_back(std::size_t(std::lower_bound(cum.begin(), cum.end(), u) - cum.begin()));
  }
  return out;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double iqr_of(std::vector<double> v) {
  if (v.size() < 4) return 0;
  std::sort(v.begin(), v.end());
  return v[(3 * v.size()) / 4] - v[v.size() / 4];
}

double metric_eval(MetricKind m, const WeightedCloud& c, std::size_t i, std::size_t j) {
  switch (m) {
    case MetricKind::heisenberg:
    case MetricKind::gromov:
      return chart_gauge_dist(c.heis[i], c.heis[j]);
    case MetricKind::euclidean:
      return euclid_dist(c.heis[i], c.heis[j]);
    default:
      return (c.sph[i] - c.sph[j]).norm();
  }
}

double cloud_diameter(const WeightedCloud& c, MetricKind m) {
  // cheap two-pass sweep from an extremal atom
  std::size_t n = c.points.size();
  std::size_t far = 0;
  double best = -1;
  for (std::size_t i = 1; i < n; i += std::max<std::size_t>(1, n / 512)) {
    double d = metric_eval(m, c, 0, i);
    if (d > best) {
      best = d;
      far = i;
    }
  }
  double diam = best;
  for (std::size_t i = 0; i < n; i += std::max<std::size_t>(1, n / 2048))
    diam = std::max(diam, metric_eval(m, c, far, i));
  return diam;
}

}  // namespace

PointwiseEstimate pointwise_dim(const WeightedCloud& cloud, MetricKind metric,
                                const PointwiseConfig& cfg) {
  const std::size_t n = cloud.points.size();
  if (n < 10000) throw estimation_error("pointwise_dim: need at least 1e4 atoms");
  double rmax = cfg.max_radius > 0 ? cfg.max_radius : cloud_diameter(cloud, metric) / 2.0;
  if (!(rmax > 0)) {
    // all atoms coincide in this metric: the local dimension is zero
    PointwiseEstimate dirac;
    dirac.centers_used = cfg.centers;
    return dirac;
  }
  double wmin = cfg.min_mass > 0 ? cfg.min_mass : 10.0 / double(n);

  std::vector<std::size_t> centers = weighted_centers(cloud.weights, cfg.centers, Rng(cfg.seed));
  std::vector<double> slopes(centers.size(), std::numeric_limits<double>::quiet_NaN());

  parallel_blocks(centers.size(), cfg.threads, [&](std::size_t, std::size_t lo, std::size_t hi) {
    std::vector<double> radii(cfg.radii), mass(cfg.radii);
    for (std::size_t ci = lo; ci < hi; ++ci) {
      std::size_t c = centers[ci];
      for (int r = 0; r < cfg.radii; ++r) {
        radii[r] = rmax * std::pow(cfg.radius_ratio, r);
        mass[r] = 0;
      }
      for (std::size_t j = 0; j < n; ++j) {
        double d = metric_eval(metric, cloud, c, j);
        for (int r = 0; r < cfg.radii; ++r)
          if (d <= radii[r]) mass[r] += cloud.weights[j];
          else break;
      }
      // fit over radii with usable mass (exclude saturated and starved ends)
      std::vector<double> x, y;
      for (int r = 0; r < cfg.radii; ++r)
        if (mass[r] >= wmin && mass[r] <= 0.5) {
          x.push_back(std::log(radii[r]));
          y.push_back(std::log(mass[r]));
        }
      if (x.size() < 4) continue;  // reported as skipped
      slopes[ci] = slope_fit(x, y, 0, int(x.size()), nullptr, nullptr);
    }
  });

  PointwiseEstimate est;
  std::vector<double> good;
  for (double s : slopes)
    if (std::isfinite(s)) good.push_back(s);
  est.centers_used = int(good.size());
  est.centers_skipped = int(slopes.size() - good.size());
  if (good.size() < std::max<std::size_t>(8, centers.size() / 4))
    throw estimation_error("pointwise_dim: insufficient mass in local balls");
  est.median = median_of(good);
  est.iqr = iqr_of(good);
  return est;
}

// --- fiber / transverse -----------------------------------------------------------

FiberTransverse fiber_transverse_dims(const WeightedCloud& cloud, const FiberConfig& cfg) {
  const std::size_t n = cloud.points.size();
  if (n < 10000) throw estimation_error("fiber_transverse_dims: need at least 1e4 atoms");
  for (const auto& h : cloud.heis)
    if (h.inf) throw domain_error("fiber_transverse_dims: cloud meets the chart infinity");

  FiberTransverse out;

  // transverse: pushforward through project_vertical, Euclidean metric on N/Z
  WeightedCloud projected = cloud;
  for (auto& h : projected.heis) h.t = 0;  // the quotient metric is |v - v'|
  PointwiseConfig pcfg;
  pcfg.centers = 64;
  pcfg.seed = cfg.seed;
  pcfg.threads = cfg.threads;
  out.transverse = pointwise_dim(projected, MetricKind::euclidean, pcfg);

  // full chart-gauge dimension, for the additivity residual
  out.dim_full = pointwise_dim(cloud, MetricKind::gromov, pcfg).median;

  // horizontal diameter for the slab ladder
  double diam = 0;
  {
    std::size_t stride = std::max<std::size_t>(1, n / 1024);
    for (std::size_t i = stride; i < n; i += stride)
      diam = std::max(diam, (cloud.heis[0].v - cloud.heis[i].v).norm());
  }
  if (!(diam > 0)) diam = 1.0;  // projection is a single point: one full slab

  // smallest slab width in {diam 2^{-j}, j = 7..2} with enough populated slabs
  Rng rng(cfg.seed);
  std::vector<std::size_t> slab_centers = weighted_centers(cloud.weights, 4 * cfg.min_slabs, rng);
  double chosen = 0;
  std::vector<std::vector<std::size_t>> slabs;
  for (int j = 7; j >= 2; --j) {
    double w = diam * std::pow(0.5, j);
    std::vector<std::vector<std::size_t>> cand;
    for (std::size_t c : slab_centers) {
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < n; ++i)
        if ((cloud.heis[i].v - cloud.heis[c].v).norm() <= w) members.push_back(i);
      if (int(members.size()) >= cfg.min_atoms_per_slab) cand.push_back(std::move(members));
      if (int(cand.size()) >= cfg.min_slabs) break;
    }
    if (int(cand.size()) >= cfg.min_slabs) {
      chosen = w;
      slabs = std::move(cand);
      break;
    }
  }
  if (slabs.empty())
    throw estimation_error("fiber_transverse_dims: fewer than the required populated slabs");
  out.slab_width = chosen;
  out.slabs_used = int(slabs.size());

  // fiber: vertical mass profile per slab under the gauge fiber metric
  // (|dt|^{1/2}): mu(|t - t0| <= rho^2) ~ rho^dim
  std::vector<double> slopes;
  for (const auto& members : slabs) {
    double wtot = 0;
    for (std::size_t i : members) wtot += cloud.weights[i];
    // center at the heaviest atom of the slab
    std::size_t c = members.front();
    for (std::size_t i : members)
      if (cloud.weights[i] > cloud.weights[c]) c = i;
    double t0 = cloud.heis[c].t;
    double tspan = 0;
    for (std::size_t i : members) tspan = std::max(tspan, std::abs(cloud.heis[i].t - t0));
    double rho_max = std::sqrt(std::max(tspan, 1e-300));
    std::vector<double> x, y;
    for (int r = 0; r < cfg.radii; ++r) {
      double rho = rho_max * std::pow(cfg.radius_ratio, r);
      double mass = 0;
      for (std::size_t i : members)
        if (std::abs(cloud.heis[i].t - t0) <= rho * rho) mass += cloud.weights[i];
      double frac = mass / wtot;
      if (frac >= 10.0 / double(members.size()) && frac <= 0.9) {
        x.push_back(std::log(rho));
        y.push_back(std::log(frac));
      }
    }
    if (x.size() >= 4) slopes.push_back(slope_fit(x, y, 0, int(x.size()), nullptr, nullptr));
  }
  if (slopes.size() < 8) {
    // strongly concentrated conditionals: treat unresolvable profiles as flat
    // only when the mass sits in the innermost shell for most slabs
    std::size_t flat = 0;
    for (const auto& members : slabs) {
      double wtot = 0, win = 0;
      std::size_t c = members.front();
      for (std::size_t i : members)
        if (cloud.weights[i] > cloud.weights[c]) c = i;
      double t0 = cloud.heis[c].t, tspan = 0;
      for (std::size_t i : members) tspan = std::max(tspan, std::abs(cloud.heis[i].t - t0));
      double inner = tspan * std::pow(cfg.radius_ratio * cfg.radius_ratio, cfg.radii - 1);
      for (std::size_t i : members) {
        wtot += cloud.weights[i];
        if (std::abs(cloud.heis[i].t - t0) <= inner) win += cloud.weights[i];
      }
      if (win >= 0.5 * wtot) ++flat;
    }
    if (flat >= slabs.size() / 2) {
      out.fiber.median = 0.0;
      out.fiber.iqr = 0.0;
      out.fiber.centers_used = int(flat);
    } else {
      throw estimation_error("fiber_transverse_dims: vertical profiles unresolvable");
    }
  } else {
    out.fiber.median = median_of(slopes);
    out.fiber.iqr = iqr_of(slopes);
    out.fiber.centers_used = int(slopes.size());
  }
  out.ly_residual = std::abs(out.dim_full - out.fiber.median - out.transverse.median);
  return out;
}

// --- dimension band ------------------------------------------------------------

BaloghReport balogh_check(double alpha, double beta, int n, double slack) {
  BaloghReport r;
  r.lower_alpha = beta - alpha;
  r.lower_codim = beta - (2.0 * alpha - 2.0 * n);
  r.upper_double = 2.0 * alpha - beta;
  r.upper_plus_one = alpha + 1.0 - beta;
  r.pass = r.lower_alpha >= -slack && r.lower_codim >= -slack &&
           r.upper_double >= -slack && r.upper_plus_one >= -slack;
  return r;
}

}  // namespace chdim

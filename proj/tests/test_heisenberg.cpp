#include <doctest.h>

#include "support.hpp"

using namespace chdim;
using namespace chdim::testing;

namespace {
const HermitianSpace& space2() {
  static HermitianSpace S = HermitianSpace::ball(2);
  return S;
}
const IwasawaFrame& frame2() {
  static IwasawaFrame F = IwasawaFrame::standard(space2());
  return F;
}
}  // namespace

TEST_CASE("group law: identity, inverse, associativity, basis-pair twist") {
  Rng rng(31);
  double worst = 0;
  for (int i = 0; i < 10000; ++i) {
    HeisPoint a = rand_heis(rng, 2, 1.0), b = rand_heis(rng, 2, 1.0), c = rand_heis(rng, 2, 1.0);
    HeisPoint ae = heis_mul(a, HeisPoint(VecC::Zero(1), 0.0));
    worst = std::max(worst, (ae.v - a.v).norm() + std::abs(ae.t - a.t));
    HeisPoint inv = heis_mul(a, heis_inverse(a));
    worst = std::max(worst, inv.v.norm() + std::abs(inv.t));
    HeisPoint l = heis_mul(heis_mul(a, b), c), r = heis_mul(a, heis_mul(b, c));
    worst = std::max(worst, (l.v - r.v).norm() + std::abs(l.t - r.t));
  }
  CHECK(worst <= 1e-13);

  // n=2, v=(1,0), w=(0,1) as real pairs: omega(v,w) = 1, so (v,0)(w,0) = (v+w, 1)
  HeisPoint v = HeisPoint::planar(cplx(1, 0), 0.0);
  HeisPoint w = HeisPoint::planar(cplx(0, 1), 0.0);
  CHECK(omega(v.v, w.v) == doctest::Approx(1.0).epsilon(1e-15));
  HeisPoint prod = heis_mul(v, w);
  CHECK(prod.v(0) == cplx(1, 1));
  CHECK(prod.t == doctest::Approx(1.0).epsilon(1e-15));

  HeisPoint inf = HeisPoint::infinity(2);
  CHECK_THROWS_AS(heis_mul(inf, v), domain_error);
}

TEST_CASE("pseudo-norm and right-invariant distance") {
  Rng rng(32);
  CHECK(heis_norm(HeisPoint::planar(cplx(0, 0), 2.25)) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(heis_norm(HeisPoint::planar(cplx(0.3, -0.4), 0.0)) ==
        doctest::Approx(0.5).epsilon(1e-15));

  double worst = 0;
  for (int i = 0; i < 10000; ++i) {
    HeisPoint a = rand_heis(rng, 2, 1.0), b = rand_heis(rng, 2, 1.0), c = rand_heis(rng, 2, 1.0);
    worst = std::max(worst,
                     std::abs(heis_dist(heis_mul(a, c), heis_mul(b, c)) - heis_dist(a, b)));
  }
  CHECK(worst <= 1e-13);
}

TEST_CASE("euclidean distance: fiber identity and quotient equality") {
  Rng rng(33);
  // central gap 4: d_E = 4 and d_H = 2
  HeisPoint a = HeisPoint::planar(cplx(0.3, 0.7), 1.0);
  HeisPoint b = HeisPoint::planar(cplx(0.3, 0.7), 5.0);
  CHECK(euclid_dist(a, b) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(heis_dist(a, b) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(euclid_dist(a, a) == 0.0);

  double worst_fiber = 0;
  for (int i = 0; i < 1000; ++i) {
    HeisPoint p = rand_heis(rng, 2, 1.0);
    HeisPoint q(p.v, p.t + rng.uniform(-3, 3));
    double de = euclid_dist(p, q), dh = heis_dist(p, q);
    worst_fiber = std::max(worst_fiber, std::abs(de - dh * dh));
  }
  CHECK(worst_fiber <= 1e-12);

  // quotient metrics agree: inf over fiber offsets of d_H equals |v - v'|
  double worst_q = 0;
  int used = 0;
  for (int i = 0; i < 60 && used < 20; ++i) {
    HeisPoint p = rand_heis(rng, 2, 1.0), q = rand_heis(rng, 2, 1.0);
    double target = (p.v - q.v).norm();
    if (target < 0.5) continue;
    ++used;
    double t_opt = p.t - omega(p.v, q.v);  // zeroes the gauge difference
    double best = std::numeric_limits<double>::infinity();
    for (int j = -500; j <= 500; ++j)
      best = std::min(best, heis_dist(p, HeisPoint(q.v, t_opt + 1e-3 * j)));
    worst_q = std::max(worst_q, std::abs(best - target));
    // the euclidean quotient is the same projection distance trivially
    CHECK((project_vertical(p) - p.v).norm() == 0.0);
  }
  CHECK(used >= 10);
  CHECK(worst_q <= 1e-6);
}

TEST_CASE("dilations: identity, doubling, exact similarity") {
  Rng rng(34);
  HeisPoint a = rand_heis(rng, 2, 1.0);
  HeisPoint same = dilate(cplx(1, 0), a);
  CHECK((same.v - a.v).norm() == 0.0);
  CHECK(same.t == a.t);

  HeisPoint d2 = dilate(cplx(2, 0), HeisPoint::planar(cplx(0.5, -1.0), 0.75));
  CHECK(d2.v(0) == cplx(1, -2));
  CHECK(d2.t == doctest::Approx(3.0).epsilon(1e-15));

  cplx lam(0.5, 0.2);
  double worst = 0;
  for (int i = 0; i < 10000; ++i) {
    HeisPoint p = rand_heis(rng, 2, 1.0), q = rand_heis(rng, 2, 1.0);
    worst = std::max(worst, std::abs(heis_dist(dilate(lam, p), dilate(lam, q)) -
                                     std::abs(lam) * heis_dist(p, q)));
  }
  CHECK(worst <= 1e-13);
  CHECK_THROWS_AS(dilate(cplx(0, 0), a), domain_error);
}

TEST_CASE("center: characterized by commutation") {
  Rng rng(35);
  HeisPoint central = HeisPoint::planar(cplx(0, 0), 1.7);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    HeisPoint g = rand_heis(rng, 2, 1.0);
    HeisPoint lhs = heis_mul(central, g), rhs = heis_mul(g, central);
    worst = std::max(worst, (lhs.v - rhs.v).norm() + std::abs(lhs.t - rhs.t));
  }
  CHECK(worst == 0.0);

  // a non-central element fails commutation with some witness
  HeisPoint h = HeisPoint::planar(cplx(1, 0), 0.0);
  bool found_witness = false;
  for (int i = 0; i < 100 && !found_witness; ++i) {
    HeisPoint g = rand_heis(rng, 2, 1.0);
    HeisPoint lhs = heis_mul(h, g), rhs = heis_mul(g, h);
    if (std::abs(lhs.t - rhs.t) > 1e-6) found_witness = true;
  }
  CHECK(found_witness);
}

TEST_CASE("chains: membership, equivariance, off-chain points") {
  const auto& S = space2();
  Rng rng(36);

  BoundaryPoint p = rand_boundary(rng, S), q = rand_boundary(rng, S);
  Chain c = chain_through(p, q, S);
  CHECK(point_on_chain(c, p, S));
  CHECK(point_on_chain(c, q, S));
  CHECK_THROWS_AS(chain_through(p, p, S), domain_error);

  // membership is isometry equivariant
  double worst_eq = 0;
  for (int i = 0; i < 100; ++i) {
    GroupElement g = rand_isometry(rng, S);
    BoundaryPoint x = chain_point(c, rng.uniform(0, 6.28), S);
    Chain gc = chain_through(boundary_act(g, p, S), boundary_act(g, q, S), S);
    worst_eq = std::max(worst_eq, on_chain_residual(gc, boundary_act(g, x, S), S));
  }
  CHECK(worst_eq <= 1e-9);

  // a generic third boundary point is off the chain (n >= 2)
  double min_residual = 1e30;
  for (int i = 0; i < 1000; ++i)
    min_residual = std::min(min_residual, on_chain_residual(c, rand_boundary(rng, S), S));
  CHECK(min_residual > 1e-4);

  // chain circle sampler stays on the chain and is uniform-ish
  auto pts = chain_points(c, 64, S);
  for (const auto& x : pts) CHECK(on_chain_residual(c, x, S) <= 1e-10);
}

TEST_CASE("chain_param_n2: endpoints and the membership oracle") {
  const auto& S = space2();
  const auto& F = frame2();

  double s0 = 1.0;
  BoundaryPoint b0 = F.from_heis(HeisPoint::planar(cplx(0, 0), s0));
  BoundaryPoint b1 = F.from_heis(HeisPoint::planar(cplx(1, 0), 0.0));
  Chain c = chain_through(b0, b1, S);

  // endpoints are attained at the circle angles where v(theta) = 0 resp. 1
  cplx v0(0.5, s0);
  double r0 = std::abs(v0);
  double theta0 = std::arg(-v0 / r0);
  double theta1 = std::arg((cplx(1, 0) - v0) / r0);
  HeisPoint at0 = chain_param_n2(s0, theta0);
  HeisPoint at1 = chain_param_n2(s0, theta1);
  CHECK(std::abs(at0.v(0)) <= 1e-14);
  CHECK(at0.t == doctest::Approx(s0).epsilon(1e-12));
  CHECK(std::abs(at1.v(0) - cplx(1, 0)) <= 1e-14);
  CHECK(std::abs(at1.t) <= 1e-14);

  // 64 equispaced angles all satisfy the algebraic membership test
  double worst = 0;
  for (int i = 0; i < 64; ++i) {
    HeisPoint h = chain_param_n2(s0, 2.0 * M_PI * double(i) / 64.0);
    worst = std::max(worst, on_chain_residual(c, F.from_heis(h), S));
  }
  CHECK(worst <= 1e-8);

  CHECK_THROWS_AS(chain_param_n2(s0, 0.0, 3), domain_error);
}

TEST_CASE("gauge-euclidean band constant on the unit box") {
  Rng rng(37);
  double band = 0;
  for (int i = 0; i < 100000; ++i) {
    VecC v1(1), v2(1);
    v1(0) = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    v2(0) = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    HeisPoint p(v1, rng.uniform(-1, 1)), q(v2, rng.uniform(-1, 1));
    double de = euclid_dist(p, q), dh = heis_dist(p, q);
    if (de < 1e-12 || dh < 1e-12) continue;
    band = std::max({band, de / dh, dh * dh / de});
  }
  MESSAGE("compact band constant: ", band);
  CHECK(band <= 10.0);
}

TEST_CASE("vertical segment: box dimension 2 under the gauge, 1 under euclidean") {
  Rng rng(38);
  std::vector<HeisPoint> pts;
  pts.reserve(100000);
  for (int i = 0; i < 100000; ++i)
    pts.push_back(HeisPoint(VecC::Zero(1), rng.uniform(0.0, 1.0)));
  BoxCountConfig cfg;
  cfg.base_scale = 0.25;
  cfg.levels = 7;
  cfg.threads = 2;
  DimEstimate h = box_count_heis(pts, true, cfg);
  DimEstimate e = box_count_euclid(pts, cfg);
  CHECK(h.slope == doctest::Approx(2.0).epsilon(0.1));
  CHECK(e.slope == doctest::Approx(1.0).epsilon(0.2));
}

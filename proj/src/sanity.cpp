#include <chdim/sanity.hpp>

namespace chdim {

namespace {

struct Battery {
  std::vector<SanityCheck> checks;
  void add(const std::string& id, double residual, double threshold) {
    checks.push_back({id, residual, threshold, residual <= threshold});
  }
};

HeisPoint rand_heis(Rng& rng, int n, double scale) {
  VecC v(n - 1);
  for (int i = 0; i < n - 1; ++i) v(i) = scale * rng.gauss_c();
  return HeisPoint(std::move(v), scale * rng.gauss());
}

BoundaryPoint rand_boundary(Rng& rng, const HermitianSpace& S) {
  VecC w(S.n);
  for (int i = 0; i < S.n; ++i) w(i) = rng.gauss_c();
  w /= w.norm();
  return from_spherical_chart(w, S);
}

HPoint rand_interior(Rng& rng, const HermitianSpace& S) {
  VecC w(S.n);
  for (int i = 0; i < S.n; ++i) w(i) = rng.gauss_c();
  w *= rng.uniform(0.0, 0.8) / w.norm();
  VecC z(S.n + 1);
  z(0) = cplx(1, 0);
  z.tail(S.n) = w;
  return make_hpoint(z, S);
}

GroupElement rand_isometry(Rng& rng, const HermitianSpace& S, double scale = 0.6) {
  const int d = S.dim();
  MatC skew(d, d);
  for (int i = 0; i < d; ++i) {
    skew(i, i) = cplx(0, scale * rng.gauss());
    for (int j = i + 1; j < d; ++j) {
      cplx a = scale * 0.5 * rng.gauss_c();
      skew(i, j) = a;
      skew(j, i) = -std::conj(a);
    }
  }
  MatC x = S.J * skew;
  MatC id = MatC::Identity(d, d);
  return normalize_isometry(GroupElement((id + x) * (id - x).inverse()), S);
}

}  // namespace

std::vector<SanityCheck> run_sanity_battery(std::uint64_t seed) {
  Battery B;
  const int n = 2;
  HermitianSpace S = HermitianSpace::ball(n);
  IwasawaFrame F = IwasawaFrame::standard(S);
  Rng rng(seed);

  // Heisenberg group axioms
  {
    double worst_assoc = 0, worst_inv = 0, worst_id = 0;
    for (int i = 0; i < 2000; ++i) {
      HeisPoint a = rand_heis(rng, n, 1.0), b = rand_heis(rng, n, 1.0),
                c = rand_heis(rng, n, 1.0);
      HeisPoint ab_c = heis_mul(heis_mul(a, b), c);
      HeisPoint a_bc = heis_mul(a, heis_mul(b, c));
      worst_assoc = std::max(worst_assoc,
                             (ab_c.v - a_bc.v).norm() + std::abs(ab_c.t - a_bc.t));
      HeisPoint e = heis_mul(a, heis_inverse(a));
      worst_inv = std::max(worst_inv, e.v.norm() + std::abs(e.t));
      HeisPoint ae = heis_mul(a, HeisPoint(VecC::Zero(n - 1), 0.0));
      worst_id = std::max(worst_id, (ae.v - a.v).norm() + std::abs(ae.t - a.t));
    }
    B.add("heis.assoc", worst_assoc, tol().heis_exact);
    B.add("heis.inverse", worst_inv, tol().heis_exact);
    B.add("heis.identity", worst_id, tol().heis_exact);
  }
  // omega antisymmetry, d_H right-invariance, dilation similarity
  {
    double worst_om = 0, worst_ri = 0, worst_dil = 0;
    cplx lam(0.5, 0.2);
    for (int i = 0; i < 2000; ++i) {
      HeisPoint a = rand_heis(rng, n, 1.0), b = rand_heis(rng, n, 1.0),
                c = rand_heis(rng, n, 1.0);
      worst_om = std::max(worst_om, std::abs(omega(a.v, b.v) + omega(b.v, a.v)));
      worst_ri = std::max(worst_ri, std::abs(heis_dist(heis_mul(a, c), heis_mul(b, c)) -
                                             heis_dist(a, b)));
      worst_dil = std::max(worst_dil,
                           std::abs(heis_dist(dilate(lam, a), dilate(lam, b)) -
                                    std::abs(lam) * heis_dist(a, b)));
    }
    B.add("heis.omega_antisymmetric", worst_om, tol().heis_exact);
    B.add("heis.dist_right_invariant", worst_ri, tol().heis_exact);
    B.add("heis.dilation_similarity", worst_dil, tol().heis_exact);
  }
  // gauge vs euclidean: fiber identity, compact band, quotient equality
  {
    double worst_fiber = 0;
    double band = 0;
    for (int i = 0; i < 20000; ++i) {
      HeisPoint a = rand_heis(rng, n, 0.5), b = a;
      b.t += rng.uniform(-2, 2);
      double de = euclid_dist(a, b), dh = heis_dist(a, b);
      worst_fiber = std::max(worst_fiber, std::abs(de - dh * dh));
      HeisPoint p = rand_heis(rng, n, 0.5), q = rand_heis(rng, n, 0.5);
      double dde = euclid_dist(p, q), ddh = heis_dist(p, q);
      if (dde > 1e-12 && ddh > 1e-12)
        band = std::max({band, dde / ddh, ddh * ddh / dde});
    }
    B.add("gauge_euclid.fiber_identity", worst_fiber, 1e-12);
    B.add("gauge_euclid.band_constant", band, 10.0);
    double worst_q = 0;
    for (int i = 0; i < 50; ++i) {
      HeisPoint a = rand_heis(rng, n, 1.0), b = rand_heis(rng, n, 1.0);
      if ((a.v - b.v).norm() < 0.5) continue;
      double target = (a.v - b.v).norm();
      double best = std::numeric_limits<double>::infinity();
      double t_opt = a.t - omega(a.v, b.v);  // zeroes the gauge difference
      for (int j = -500; j <= 500; ++j) {
        HeisPoint bb(b.v, t_opt + 1e-3 * j);
        best = std::min(best, heis_dist(a, bb));
      }
      worst_q = std::max(worst_q, std::abs(best - target));
    }
    B.add("gauge_euclid.quotient_equality", worst_q, 1e-6);
  }
  // hyperbolic metric: invariance, busemann, geodesic, gromov
  {
    double worst_inv = 0;
    for (int i = 0; i < 100; ++i) {
      HPoint x = rand_interior(rng, S), y = rand_interior(rng, S);
      GroupElement g = rand_isometry(rng, S);
      worst_inv = std::max(worst_inv, std::abs(dist(interior_act(g, x, S),
                                                    interior_act(g, y, S), S) -
                                               dist(x, y, S)));
    }
    B.add("dist.isometry_invariance", worst_inv, tol().isometry_residual);
    double a_axis = std::abs(dist(F.origin, interior_act(F.a_matrix(0.7), F.origin, S), S) - 0.7);
    B.add("dist.a_translation", a_axis, 1e-9);

    double worst_cocycle = 0, worst_oracle = 0;
    for (int i = 0; i < 100; ++i) {
      BoundaryPoint xi = rand_boundary(rng, S), eta = rand_boundary(rng, S);
      if (projective_distance(xi, eta) < 1e-3) continue;
      HPoint x = rand_interior(rng, S), y = rand_interior(rng, S), z = rand_interior(rng, S);
      worst_cocycle = std::max(worst_cocycle,
                               std::abs(busemann(xi, x, z, S) -
                                        busemann(xi, x, y, S) - busemann(xi, y, z, S)));
      HPoint far = geodesic_point(eta, xi, 20.0, S);
      worst_oracle = std::max(worst_oracle, std::abs(busemann(xi, x, y, S) -
                                                     (dist(x, far, S) - dist(y, far, S))));
    }
    B.add("busemann.cocycle", worst_cocycle, 1e-12);
    B.add("busemann.limit_oracle", worst_oracle, tol().busemann_oracle);

    double worst_speed = 0, worst_conf = 0, worst_equi = 0;
    GromovMetricTag tag{F.origin};
    for (int i = 0; i < 100; ++i) {
      BoundaryPoint xi = rand_boundary(rng, S), eta = rand_boundary(rng, S);
      if (projective_distance(xi, eta) < 1e-3) continue;
      double s1 = rng.uniform(-2.5, 2.5), s2 = rng.uniform(-2.5, 2.5);
      worst_speed = std::max(worst_speed,
                             std::abs(dist(geodesic_point(xi, eta, s1, S),
                                           geodesic_point(xi, eta, s2, S), S) -
                                      std::abs(s1 - s2)));
      HPoint y = rand_interior(rng, S);
      GromovMetricTag tagy{y};
      double dy = gromov_dist(tagy, xi, eta, S);
      double pred = std::exp(0.5 * (busemann(xi, F.origin, y, S) +
                                    busemann(eta, F.origin, y, S))) *
                    gromov_dist(tag, xi, eta, S);
      worst_conf = std::max(worst_conf, std::abs(dy - pred) / std::max(1e-12, dy));
      GroupElement g = rand_isometry(rng, S);
      GromovMetricTag tagg{interior_act(g, F.origin, S)};
      worst_equi = std::max(worst_equi,
                            std::abs(gromov_dist(tagg, boundary_act(g, xi, S),
                                                 boundary_act(g, eta, S), S) -
                                     gromov_dist(tag, xi, eta, S)));
    }
    B.add("geodesic.unit_speed", worst_speed, tol().geodesic_unit_speed);
    B.add("gromov.conformality", worst_conf, tol().gromov_conformality);
    B.add("gromov.equivariance", worst_equi, tol().gromov_conformality);
  }
  // Iwasawa material
  {
    double worst_hom = 0, worst_conj = 0;
    double t = std::log(2.0);
    for (int i = 0; i < 1000; ++i) {
      HeisPoint h1 = rand_heis(rng, n, 1.0), h2 = rand_heis(rng, n, 1.0);
      worst_hom = std::max(worst_hom,
                           (group_mul(F.n_matrix(h1), F.n_matrix(h2)).m -
                            F.n_matrix(heis_mul(h1, h2)).m)
                               .cwiseAbs()
                               .maxCoeff());
      double tt = rng.uniform(-1.5, 1.5);
      worst_conj = std::max(
          worst_conj, (group_mul(group_mul(F.a_matrix(-tt), F.n_matrix(h1)), F.a_matrix(tt)).m -
                       F.n_matrix(dilate(std::exp(tt), h1)).m)
                          .cwiseAbs()
                          .maxCoeff());
      (void)t;
    }
    B.add("iwasawa.n_homomorphism", worst_hom, tol().homomorphism);
    B.add("iwasawa.conjugation_dilation", worst_conj, tol().conjugation);

    double worst_rt = 0, worst_vert = 0;
    GroupElement id(MatC::Identity(S.dim(), S.dim()));
    Chain zchain = chain_through(F.xi_minus, F.xi_plus, S);
    for (int i = 0; i < 500; ++i) {
      HeisPoint h = rand_heis(rng, n, 2.0);
      HeisPoint back = phi_chart_inv(id, F, phi_chart(id, F, h));
      worst_rt = std::max(worst_rt, (back.v - h.v).norm() + std::abs(back.t - h.t));
      HeisPoint vert(VecC::Zero(n - 1), rng.uniform(-3, 3));
      worst_vert = std::max(worst_vert, on_chain_residual(zchain, F.from_heis(vert), S));
    }
    B.add("phi.round_trip", worst_rt, tol().phi_roundtrip);
    B.add("phi.vertical_line_on_chain", worst_vert, tol().chain_membership);
  }
  // spectral classification and fixed points
  {
    GroupElement a = F.a_matrix(1.0);
    GroupElement nm = F.n_matrix(rand_heis(rng, n, 1.0));
    MatC u = MatC::Identity(S.dim(), S.dim());
    u(1, 1) = std::polar(1.0, 0.8);
    GroupElement ell(std::move(u));
    bool kinds = classify(a, S) == IsometryKind::hyperbolic &&
                 classify(nm, S) == IsometryKind::parabolic &&
                 classify(ell, S) == IsometryKind::elliptic;
    B.add("classify.kinds", kinds ? 0.0 : 1.0, 0.5);

    double worst_null = 0, worst_fix = 0;
    for (int i = 0; i < 20; ++i) {
      GroupElement c = rand_isometry(rng, S);
      GroupElement g = normalize_isometry(
          group_mul(group_mul(c, a), group_inverse(c, S)), S);
      FixedPoints fp = fixed_boundary_points(g, S);
      worst_null = std::max(worst_null, std::abs(form_eval(fp.attracting.z, fp.attracting.z, S)));
      worst_fix = std::max(worst_fix,
                           projective_distance(boundary_act(g, fp.attracting, S), fp.attracting));
    }
    B.add("fixed_points.null", worst_null, tol().boundary_null);
    B.add("fixed_points.fixed", worst_fix, tol().fixed_point);
  }
  // form symmetry and sesquilinearity
  {
    double worst = 0;
    for (int i = 0; i < 500; ++i) {
      VecC x(S.dim()), y(S.dim());
      for (int j = 0; j < S.dim(); ++j) {
        x(j) = rng.gauss_c();
        y(j) = rng.gauss_c();
      }
      worst = std::max(worst, std::abs(form_eval(x, y, S) - std::conj(form_eval(y, x, S))));
      cplx a = rng.gauss_c();
      worst = std::max(worst, std::abs(form_eval(x, a * y, S) - a * form_eval(x, y, S)));
    }
    B.add("form.sesquilinear", worst, 1e-13);
  }
  // chain parametrization (n = 2)
  {
    double s0 = 1.0;
    Chain c = chain_through(F.from_heis(HeisPoint::planar(cplx(0, 0), s0)),
                            F.from_heis(HeisPoint::planar(cplx(1, 0), 0.0)), S);
    double worst = 0;
    for (int i = 0; i < 64; ++i)
      worst = std::max(worst, on_chain_residual(
                                  c, F.from_heis(chain_param_n2(s0, 2 * M_PI * i / 64.0)), S));
    B.add("chain.param_n2", worst, tol().chain_membership);
  }
  return B.checks;
}

}  // namespace chdim

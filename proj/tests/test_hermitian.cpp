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

TEST_CASE("hermitian space: ball form is valid, signature (1,n)") {
  for (int n : {2, 3, 5}) {
    HermitianSpace S = HermitianSpace::ball(n);
    CHECK_NOTHROW(S.validate());
    CHECK((S.J - S.J.adjoint()).cwiseAbs().maxCoeff() <= 1e-14);
  }
  HermitianSpace bad = HermitianSpace::ball(2);
  bad.J(0, 0) = cplx(-1, 0);  // signature (0,3)
  CHECK_THROWS_AS(bad.validate(), input_error);
}

TEST_CASE("form_eval on basis vectors and conjugate symmetry") {
  const auto& S = space2();
  VecC e0 = VecC::Zero(3), e1 = VecC::Zero(3);
  e0(0) = cplx(1, 0);
  e1(1) = cplx(1, 0);
  CHECK(form_eval(e0, e0, S) == cplx(1, 0));
  CHECK(form_eval(e1, e1, S) == cplx(-1, 0));

  Rng rng(11);
  double worst_sym = 0, worst_lin = 0;
  for (int i = 0; i < 500; ++i) {
    VecC x(3), y(3), z(3);
    for (int j = 0; j < 3; ++j) {
      x(j) = rng.gauss_c();
      y(j) = rng.gauss_c();
      z(j) = rng.gauss_c();
    }
    worst_sym = std::max(worst_sym,
                         std::abs(form_eval(x, y, S) - std::conj(form_eval(y, x, S))));
    cplx a = rng.gauss_c();
    // sesquilinearity: linear in the second slot, conjugate-linear in the first
    worst_lin = std::max(worst_lin, std::abs(form_eval(x, a * y + z, S) -
                                             (a * form_eval(x, y, S) + form_eval(x, z, S))));
    worst_lin = std::max(worst_lin,
                         std::abs(form_eval(a * x, y, S) -
                                  std::conj(a) * form_eval(x, y, S)));
  }
  CHECK(worst_sym <= 1e-13);
  CHECK(worst_lin <= 1e-13);

  VecC short_vec(2);
  CHECK_THROWS_AS(form_eval(short_vec, e0, S), input_error);
}

TEST_CASE("normalize_isometry: fixed point, idempotence, perturbation repair") {
  const auto& S = space2();
  GroupElement id(MatC::Identity(3, 3));
  CHECK((normalize_isometry(id, S).m - id.m).cwiseAbs().maxCoeff() <= 1e-14);

  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    GroupElement g = rand_isometry(rng, S);
    GroupElement g1 = normalize_isometry(g, S);
    CHECK((g1.m - g.m).cwiseAbs().maxCoeff() <= 1e-12);  // already an isometry

    MatC noise(3, 3);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) noise(r, c) = rng.gauss_c();
    GroupElement dirty(g.m + 1e-6 * noise);
    GroupElement fixed = normalize_isometry(dirty, S);
    // oracle: direct form evaluation after the call
    CHECK(isometry_residual(fixed, S) <= 1e-12);
    CHECK((fixed.m - dirty.m).cwiseAbs().maxCoeff() <= 1e-4);
    // idempotent
    GroupElement again = normalize_isometry(fixed, S);
    CHECK((again.m - fixed.m).cwiseAbs().maxCoeff() <= 1e-12);
  }

  GroupElement garbage(MatC::Ones(3, 3) * 2.0);
  CHECK_THROWS_AS(normalize_isometry(garbage, S), conditioning_error);
}

TEST_CASE("normalize_isometry: closure under products") {
  const auto& S = space2();
  Rng rng(6);
  // drift must not accumulate along long product chains; the residual is
  // measured relative to |g|^2, the scale floating point can hold it to
  double worst = 0;
  GroupElement acc(MatC::Identity(3, 3));
  for (int i = 0; i < 200; ++i) {
    acc = normalize_isometry(group_mul(acc, rand_isometry(rng, S)), S);
    double s = acc.m.cwiseAbs().maxCoeff();
    worst = std::max(worst, isometry_residual(acc, S) / std::max(1.0, s * s));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("classify: a_t hyperbolic, identity elliptic, n(v,t) parabolic") {
  const auto& S = space2();
  const auto& F = frame2();

  // diag(e^t, 1, e^-t) in Siegel-adapted coordinates, t = 1
  GroupElement a = F.a_matrix(-1.0);  // Siegel diag(e, 1, e^{-1}) pulled to the ball
  CHECK(classify(a, S) == IsometryKind::hyperbolic);

  GroupElement id(MatC::Identity(3, 3));
  CHECK(classify(id, S) == IsometryKind::elliptic);

  GroupElement n = F.n_matrix(HeisPoint::planar(cplx(0.7, -0.3), 0.4));
  CHECK(classify(n, S) == IsometryKind::parabolic);
  GroupElement nc = F.n_matrix(HeisPoint::planar(cplx(0, 0), 1.3));  // central translation
  CHECK(classify(nc, S) == IsometryKind::parabolic);

  // boundary elliptic: unitary block diag in the ball model
  MatC u = MatC::Identity(3, 3);
  u(1, 1) = std::polar(1.0, 0.9);
  u(2, 2) = std::polar(1.0, -1.7);
  CHECK(classify(GroupElement(u), S) == IsometryKind::elliptic);
}

TEST_CASE("classify is conjugation invariant") {
  const auto& S = space2();
  const auto& F = frame2();
  Rng rng(7);
  GroupElement hyp = F.a_matrix(0.8);
  GroupElement par = F.n_matrix(HeisPoint::planar(cplx(1, 0), 0.0));
  MatC u = MatC::Identity(3, 3);
  u(1, 1) = std::polar(1.0, 0.5);
  GroupElement ell(u);
  for (int i = 0; i < 100; ++i) {
    GroupElement h = rand_isometry(rng, S);
    GroupElement hinv = group_inverse(h, S);
    auto conj = [&](const GroupElement& g) {
      return normalize_isometry(group_mul(group_mul(h, g), hinv), S);
    };
    CHECK(classify(conj(hyp), S) == IsometryKind::hyperbolic);
    CHECK(classify(conj(par), S) == IsometryKind::parabolic);
    CHECK(classify(conj(ell), S) == IsometryKind::elliptic);
  }
}

TEST_CASE("fixed_boundary_points: axes, inverse swap, conjugation equivariance") {
  const auto& S = space2();
  const auto& F = frame2();

  // a_{-1} is diag(e,1,e^{-1}) in Siegel coordinates: fixed points are the
  // isotropic coordinate axes, i.e. the frame's xi_plus / xi_minus
  GroupElement a = F.a_matrix(-1.0);
  FixedPoints fp = fixed_boundary_points(a, S);
  CHECK(projective_distance(fp.attracting, F.xi_plus) <= 1e-9);
  CHECK(projective_distance(fp.repelling, F.xi_minus) <= 1e-9);

  Rng rng(8);
  for (int i = 0; i < 30; ++i) {
    GroupElement c = rand_isometry(rng, S);
    GroupElement g = normalize_isometry(
        group_mul(group_mul(c, F.a_matrix(1.0)), group_inverse(c, S)), S);
    FixedPoints f1 = fixed_boundary_points(g, S);
    FixedPoints f2 = fixed_boundary_points(group_inverse(g, S), S);
    CHECK(projective_distance(f1.attracting, f2.repelling) <= 1e-9);
    CHECK(projective_distance(f1.repelling, f2.attracting) <= 1e-9);

    // null invariant and projective fixedness
    CHECK(std::abs(form_eval(f1.attracting.z, f1.attracting.z, S)) <= 1e-10);
    CHECK(projective_distance(boundary_act(g, f1.attracting, S), f1.attracting) <= 1e-10);
    CHECK(projective_distance(boundary_act(g, f1.repelling, S), f1.repelling) <= 1e-10);

    GroupElement h = rand_isometry(rng, S);
    GroupElement ghg = normalize_isometry(group_mul(group_mul(h, g), group_inverse(h, S)), S);
    FixedPoints f3 = fixed_boundary_points(ghg, S);
    CHECK(projective_distance(f3.attracting, boundary_act(h, f1.attracting, S)) <= 1e-8);
  }

  GroupElement id(MatC::Identity(3, 3));
  CHECK_THROWS_AS(fixed_boundary_points(id, S), domain_error);
}

TEST_CASE("translation_length: preconditions, a_t calibration, power scaling") {
  const auto& S = space2();
  const auto& F = frame2();

  GroupElement id(MatC::Identity(3, 3));
  CHECK_THROWS_AS(translation_length(id, F.origin, 16, S), domain_error);
  CHECK_THROWS_AS(translation_length(F.a_matrix(1.0), F.origin, 4, S), input_error);

  Rng rng(9);
  GroupElement c = rand_isometry(rng, S);
  GroupElement g =
      normalize_isometry(group_mul(group_mul(c, F.a_matrix(1.0)), group_inverse(c, S)), S);
  HPoint o = rand_interior(rng, S, 0.5);
  TranslationLength t1 = translation_length(g, o, 16, S);
  CHECK(t1.value == doctest::Approx(1.0).epsilon(0.05));

  GroupElement g2 = normalize_isometry(group_mul(g, g), S);
  TranslationLength t2 = translation_length(g2, o, 16, S);
  CHECK(t2.value == doctest::Approx(2.0 * t1.value).epsilon(0.05));

  // monotone convergence report exists
  CHECK(t1.by_step.size() >= 4);
}

TEST_CASE("boundary points: canonical form and projective equality") {
  const auto& S = space2();
  Rng rng(10);
  for (int i = 0; i < 200; ++i) {
    BoundaryPoint p = rand_boundary(rng, S);
    CHECK(std::abs(p.z.norm() - 1.0) <= 1e-12);
    CHECK(p.z(0).imag() == 0.0);
    CHECK(p.z(0).real() > 0.0);
    CHECK(std::abs(form_eval(p.z, p.z, S)) <= 1e-10);
    // rescaling by any phase/scale canonicalizes back to the same vector
    BoundaryPoint q = make_boundary_point(p.z * std::polar(3.7, rng.uniform(0, 6.28)), S);
    CHECK(projective_distance(p, q) <= 1e-9);
  }
  VecC not_null(3);
  not_null << cplx(1, 0), cplx(0.2, 0), cplx(0, 0);
  CHECK_THROWS_AS(make_boundary_point(not_null, S), domain_error);
}

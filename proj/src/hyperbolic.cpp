#include <chdim/hyperbolic.hpp>

namespace chdim {

double dist(const HPoint& x, const HPoint& y, const HermitianSpace& S) {
  // HPoint representatives are canonical (<z,z> = +1), so the invariant
  // cosh^2 d = <X,Y><Y,X>/(<X,X><Y,Y>) reduces to cosh d = |<X,Y>|.
  // Re-evaluating the self-forms would wreck points far along a geodesic:
  // their representatives sit within ~e^{-2s} of the null cone and the
  // self-form loses all significance.
  double q = std::abs(form_eval(x.z, y.z, S));
  if (q < 1.0) q = 1.0;  // rounding guard; q >= 1 by reversed Cauchy-Schwarz
  return std::acosh(q);
}

double busemann(const BoundaryPoint& xi, const HPoint& x, const HPoint& y,
                const HermitianSpace& S) {
  cplx q = form_eval(xi.z, xi.z, S);
  if (std::abs(q) > tol().boundary_null)
    throw domain_error("busemann: xi is not a boundary point");
  double ax = std::abs(form_eval(xi.z, x.z, S));
  double ay = std::abs(form_eval(xi.z, y.z, S));
  double xx = form_eval(x.z, x.z, S).real();
  double yy = form_eval(y.z, y.z, S).real();
  return std::log(ax / ay) + 0.5 * std::log(yy / xx);
}

HPoint geodesic_point(const BoundaryPoint& xi, const BoundaryPoint& eta, double s,
                      const HermitianSpace& S) {
  if (projective_distance(xi, eta) <= tol().projective_eq)
    throw domain_error("geodesic_point: endpoints coincide");
  cplx ip = form_eval(xi.z, eta.z, S);
  double a = std::abs(ip);
  if (!(a > 0)) throw numeric_error("geodesic_point: degenerate endpoint pair");
  // rescale so <Xi', H'> = 1/2 (real): interior combinations have <z,z> = +1
  VecC hrot = eta.z * (std::conj(ip) / a);
  double c = 1.0 / std::sqrt(2.0 * a);
  VecC z = std::exp(-s) * (xi.z * c) + std::exp(s) * (hrot * c);
  HPoint p;
  p.z = std::move(z);  // <z,z> = 1 exactly by construction
  return p;
}

double gromov_dist(const GromovMetricTag& tag, const BoundaryPoint& xi,
                   const BoundaryPoint& eta, const HermitianSpace& S) {
  if (projective_distance(xi, eta) <= tol().projective_eq)
    throw domain_error("gromov_dist: points coincide");
  HPoint p = geodesic_point(xi, eta, 0.0, S);
  double b = busemann(xi, tag.base, p, S) + busemann(eta, tag.base, p, S);
  return std::exp(-0.5 * b);
}

double gromov_dist_total(const GromovMetricTag& tag, const BoundaryPoint& xi,
                         const BoundaryPoint& eta, const HermitianSpace& S) {
  if (projective_distance(xi, eta) <= tol().projective_eq) return 0.0;
  return gromov_dist(tag, xi, eta, S);
}

VecC spherical_chart(const BoundaryPoint& xi) {
  // canonical rep: xi.z = (z0, w') with |z0| = |w'|; chart w = w'/z0, |w| = 1
  const int n = int(xi.z.size()) - 1;
  return xi.z.tail(n) / xi.z(0);
}

BoundaryPoint from_spherical_chart(const VecC& w, const HermitianSpace& S) {
  if (w.size() != S.n) throw input_error("from_spherical_chart: wrong length");
  VecC z(S.n + 1);
  z(0) = cplx(1, 0);
  z.tail(S.n) = w;
  return make_boundary_point(z, S, 1e-3);
}

double spherical_dist(const BoundaryPoint& xi, const BoundaryPoint& eta) {
  return (spherical_chart(xi) - spherical_chart(eta)).norm();
}

BoundaryPoint boundary_act(const GroupElement& g, const BoundaryPoint& xi,
                           const HermitianSpace& S) {
  return make_boundary_point(g.m * xi.z, S, tol().boundary_null_input);
}

HPoint interior_act(const GroupElement& g, const HPoint& x, const HermitianSpace& S) {
  (void)S;
  // J-unitary action preserves the canonical scaling <z,z> = 1 exactly;
  // re-evaluating the self-form of g z loses all significance once |g| is
  // large (long words), so no renormalization happens here
  HPoint p;
  p.z = g.m * x.z;
  return p;
}

// --- Iwasawa frame -----------------------------------------------------------

IwasawaFrame IwasawaFrame::standard(const HermitianSpace& S) {
  IwasawaFrame F;
  F.space = S;
  const int n = S.n;
  const int d = n + 1;

  F.j_siegel = MatC::Zero(d, d);
  F.j_siegel(0, n) = cplx(1, 0);
  F.j_siegel(n, 0) = cplx(1, 0);
  for (int i = 1; i < n; ++i) F.j_siegel(i, i) = cplx(-1, 0);

  // Cayley involution: ball e_0 <-> (e_0 + e_n)/sqrt2, ball e_n <-> (e_0 - e_n)/sqrt2
  F.cayley = MatC::Zero(d, d);
  const double r = 1.0 / std::sqrt(2.0);
  F.cayley(0, 0) = r;
  F.cayley(n, 0) = r;
  for (int i = 1; i < n; ++i) F.cayley(i, i) = cplx(1, 0);
  F.cayley(0, n) = r;
  F.cayley(n, n) = -r;

  VecC plus = VecC::Zero(d), minus = VecC::Zero(d), o = VecC::Zero(d);
  plus(0) = r;
  plus(n) = r;  // ball rep of Siegel e_0
  minus(0) = r;
  minus(n) = -r;  // ball rep of Siegel e_n
  o(0) = cplx(1, 0);
  F.xi_plus = make_boundary_point(plus, S);
  F.xi_minus = make_boundary_point(minus, S);
  F.origin = make_hpoint(o, S);
  return F;
}

GroupElement IwasawaFrame::a_matrix(double t) const {
  const int n = space.n;
  MatC m = MatC::Identity(n + 1, n + 1);
  m(0, 0) = std::exp(-t);
  m(n, n) = std::exp(t);
  return GroupElement(cayley * m * cayley);  // cayley is an involution
}

GroupElement IwasawaFrame::n_matrix(const HeisPoint& h) const {
  if (h.inf) throw domain_error("n_matrix: infinity has no unipotent representative");
  const int n = space.n;
  if (h.v.size() != n - 1) throw input_error("n_matrix: horizontal part has wrong length");
  MatC m = MatC::Identity(n + 1, n + 1);
  double nv2 = h.v.squaredNorm();
  m(0, n) = cplx(0.5 * nv2, h.t);
  for (int i = 1; i < n; ++i) {
    m(0, i) = std::conj(h.v(i - 1));
    m(i, n) = h.v(i - 1);
  }
  return GroupElement(cayley * m * cayley);
}

BoundaryPoint IwasawaFrame::from_heis(const HeisPoint& h) const {
  if (h.inf) return xi_plus;
  return boundary_act(n_matrix(h), xi_minus, space);
}

HeisPoint IwasawaFrame::to_heis(const BoundaryPoint& xi) const {
  const int n = space.n;
  VecC zs = cayley * xi.z;  // Siegel coordinates
  double zn = std::abs(zs(n));
  if (zn <= tol().projective_eq * zs.norm()) return HeisPoint::infinity(n);
  VecC v = zs.segment(1, n - 1) / zs(n);
  double s = (zs(0) / zs(n)).imag();
  return HeisPoint(std::move(v), s);
}

BoundaryPoint phi_chart(const GroupElement& g, const IwasawaFrame& F, const HeisPoint& h) {
  return boundary_act(group_mul(g, F.n_matrix(h)), F.xi_minus, F.space);
}

HeisPoint phi_chart_inv(const GroupElement& g, const IwasawaFrame& F, const BoundaryPoint& xi) {
  BoundaryPoint pulled = boundary_act(group_inverse(g, F.space), xi, F.space);
  HeisPoint h = F.to_heis(pulled);
  if (h.inf)
    throw domain_error("phi_chart_inv: point is the excluded chart point g.xi_plus");
  return h;
}

// defined here (needs dist); declared in hermitian.hpp
TranslationLength translation_length(const GroupElement& g, const HPoint& o,
                                     unsigned k, const HermitianSpace& S) {
  if (k < 8) throw input_error("translation_length: k must be >= 8");
  if (classify(g, S) != IsometryKind::hyperbolic)
    throw domain_error("translation_length: element is not hyperbolic");
  TranslationLength out;
  GroupElement p = g;
  unsigned step = 1;
  while (true) {
    double d = dist(o, interior_act(p, o, S), S);
    out.by_step.emplace_back(step, d / double(step));
    if (step >= k) {
      out.value = d / double(step);
      break;
    }
    unsigned next = std::min(2 * step, k);
    if (next == 2 * step) {
      p = normalize_isometry(group_mul(p, p), S);
    } else {
      p = normalize_isometry(group_mul(p, group_pow(g, next - step, S)), S);
    }
    step = next;
  }
  return out;
}

}  // namespace chdim

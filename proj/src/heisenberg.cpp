#include <chdim/heisenberg.hpp>

#include <Eigen/SVD>

namespace chdim {

namespace {
void require_finite(const HeisPoint& a, const char* who) {
  if (a.inf) throw domain_error(std::string(who) + ": infinity is not a group element");
}
}  // namespace

double omega(const VecC& v, const VecC& w) {
  if (v.size() != w.size()) throw input_error("omega: dimension mismatch");
  return v.dot(w).imag();  // Eigen dot conjugates the first argument
}

HeisPoint heis_mul(const HeisPoint& a, const HeisPoint& b) {
  require_finite(a, "heis_mul");
  require_finite(b, "heis_mul");
  return HeisPoint(a.v + b.v, a.t + b.t + omega(a.v, b.v));
}

HeisPoint heis_inverse(const HeisPoint& a) {
  require_finite(a, "heis_inverse");
  return HeisPoint(-a.v, -a.t);  // omega(v,-v) = 0
}

double heis_norm(const HeisPoint& a) {
  require_finite(a, "heis_norm");
  double nv = a.v.norm();
  return std::pow(nv * nv * nv * nv + a.t * a.t, 0.25);
}

double heis_dist(const HeisPoint& a, const HeisPoint& b) {
  return heis_norm(heis_mul(a, heis_inverse(b)));
}

double chart_gauge_dist(const HeisPoint& a, const HeisPoint& b) {
  return heis_norm(heis_mul(heis_inverse(b), a));
}

double euclid_dist(const HeisPoint& a, const HeisPoint& b) {
  require_finite(a, "euclid_dist");
  require_finite(b, "euclid_dist");
  double dv = (a.v - b.v).norm();
  double dt = a.t - b.t;
  return std::sqrt(dv * dv + dt * dt);
}

HeisPoint dilate(cplx lambda, const HeisPoint& a) {
  require_finite(a, "dilate");
  if (lambda == cplx(0, 0)) throw domain_error("dilate: lambda must be nonzero");
  return HeisPoint(lambda * a.v, std::norm(lambda) * a.t);
}

VecC project_vertical(const HeisPoint& a) {
  require_finite(a, "project_vertical");
  return a.v;
}

namespace {
bool boundary_less(const BoundaryPoint& a, const BoundaryPoint& b) {
  for (Eigen::Index i = 0; i < a.z.size(); ++i) {
    if (a.z(i).real() != b.z(i).real()) return a.z(i).real() < b.z(i).real();
    if (a.z(i).imag() != b.z(i).imag()) return a.z(i).imag() < b.z(i).imag();
  }
  return false;
}
}  // namespace

Chain chain_through(const BoundaryPoint& p, const BoundaryPoint& q, const HermitianSpace& S) {
  (void)S;
  if (projective_distance(p, q) <= tol().projective_eq)
    throw domain_error("chain_through: defining points coincide");
  Chain c;
  if (boundary_less(p, q)) {
    c.p = p;
    c.q = q;
  } else {
    c.p = q;
    c.q = p;
  }
  return c;
}

double on_chain_residual(const Chain& c, const BoundaryPoint& x, const HermitianSpace& S) {
  MatC m(S.dim(), 3);
  m.col(0) = x.z;
  m.col(1) = c.p.z;
  m.col(2) = c.q.z;  // columns already unit norm by canonicalization
  Eigen::JacobiSVD<MatC> svd(m);
  return svd.singularValues()(2);
}

bool point_on_chain(const Chain& c, const BoundaryPoint& x, const HermitianSpace& S,
                    double tolerance) {
  return on_chain_residual(c, x, S) <= tolerance;
}

BoundaryPoint chain_point(const Chain& c, double theta, const HermitianSpace& S) {
  cplx ip = form_eval(c.p.z, c.q.z, S);
  double a = std::abs(ip);
  if (!(a > 0)) throw numeric_error("chain_point: degenerate plane (orthogonal null pair)");
  VecC qrot = c.q.z * (std::conj(ip) / a);  // now <p, qrot> = |ip| > 0
  double s = 1.0 / std::sqrt(2.0 * a);
  VecC eplus = (c.p.z + qrot) * s;   // <e+,e+> = +1
  VecC eminus = (c.p.z - qrot) * s;  // <e-,e-> = -1, <e+,e-> = 0
  VecC z = eplus + std::polar(1.0, theta) * eminus;
  return make_boundary_point(z, S, tol().boundary_null_input);
}

std::vector<BoundaryPoint> chain_points(const Chain& c, int count, const HermitianSpace& S) {
  std::vector<BoundaryPoint> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i)
    out.push_back(chain_point(c, 2.0 * M_PI * double(i) / double(count), S));
  return out;
}

HeisPoint chain_param_n2(double s0, double theta, int n) {
  if (n != 2) throw domain_error("chain_param_n2: explicit circle form exists for n = 2 only");
  cplx v0(0.5, s0);
  double r0 = std::abs(v0);
  cplx v = v0 + r0 * std::polar(1.0, theta);
  double s = s0 + (std::conj(v0) * v).imag();
  return HeisPoint::planar(v, s);
}

}  // namespace chdim

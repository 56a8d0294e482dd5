#pragma once

// The Heisenberg group H_n = C^{n-1} x R with the group law
//   (v,s)(w,t) = (v+w, s+t+omega(v,w)),   omega(v,w) = Im <v,w>,
// where <v,w> = sum conj(v_i) w_i and C^{n-1} = R^{2(n-1)} interleaves
// (Re z_i, Im z_i). Gauge (Heisenberg) and Euclidean metrics, dilations,
// vertical projection, and chains (boundary circles of complex geodesics).

#include <chdim/hermitian.hpp>

namespace chdim {

struct HeisPoint {
  VecC v;          // horizontal part, length n-1
  double t = 0;    // vertical part
  bool inf = false;  // the compactification point; rejected by metric ops

  HeisPoint() = default;
  HeisPoint(VecC vv, double tt) : v(std::move(vv)), t(tt) {}
  static HeisPoint infinity(int n) {
    HeisPoint p;
    p.v = VecC::Zero(n - 1);
    p.inf = true;
    return p;
  }
  // n = 2 convenience: one complex horizontal coordinate
  static HeisPoint planar(cplx v1, double tt) {
    VecC v(1);
    v(0) = v1;
    return HeisPoint(std::move(v), tt);
  }
};

double omega(const VecC& v, const VecC& w);

HeisPoint heis_mul(const HeisPoint& a, const HeisPoint& b);
HeisPoint heis_inverse(const HeisPoint& a);
double heis_norm(const HeisPoint& a);                      // (|v|^4 + t^2)^{1/4}
double heis_dist(const HeisPoint& a, const HeisPoint& b);  // |a b^{-1}|, right-invariant
double euclid_dist(const HeisPoint& a, const HeisPoint& b);

// Chart gauge metric |b^{-1} a|, the left-invariant twin of heis_dist.
// The boundary chart phi(h) = n(h) xi_minus transports the Gromov metric
// class onto *this* one (the two twins are exchanged by inversion and are
// not locally bilipschitz to each other).
double chart_gauge_dist(const HeisPoint& a, const HeisPoint& b);

// h_lambda(v,t) = (lambda v, |lambda|^2 t); similitude of ratio |lambda|
HeisPoint dilate(cplx lambda, const HeisPoint& a);

VecC project_vertical(const HeisPoint& a);  // N -> N/Z, isometric to R^{2(n-1)}

// --- chains ------------------------------------------------------------------

struct Chain {
  BoundaryPoint p, q;  // canonically ordered defining points
};

Chain chain_through(const BoundaryPoint& p, const BoundaryPoint& q,
                    const HermitianSpace& S);

// smallest singular value of the column-normalized (n+1)x3 matrix [x P Q];
// zero iff x lies in the complex 2-plane spanning the chain
double on_chain_residual(const Chain& c, const BoundaryPoint& x,
                         const HermitianSpace& S);

bool point_on_chain(const Chain& c, const BoundaryPoint& x, const HermitianSpace& S,
                    double tolerance = 1e-8);

// Uniform parametrization of the chain circle: with a pseudo-orthonormal
// basis E+, E- of the (1,1)-plane, the null lines are [E+ + e^{i theta} E-].
BoundaryPoint chain_point(const Chain& c, double theta, const HermitianSpace& S);
std::vector<BoundaryPoint> chain_points(const Chain& c, int count, const HermitianSpace& S);

// The chain through (0,s0) and (1,0) in Heisenberg coordinates (n = 2 only):
// v(theta) = v0 + r0 e^{i theta} with v0 = 1/2 + i s0, r0 = |v0|, and
// s(theta) = s0 + Im(conj(v0) v(theta)). Every output lies on
// chain_through(phi(0,s0), phi(1,0)).
HeisPoint chain_param_n2(double s0, double theta, int n = 2);

}  // namespace chdim

#pragma once

// H_C^n and its boundary: distance, Busemann cocycle, Gromov and spherical
// metrics, boundary action, Iwasawa data (explicit N and A matrices in
// Siegel-adapted coordinates conjugated into the ball model by a fixed
// Cayley involution), and the boundary charts phi_g.
//
// Normalization: cosh^2 d(x,y) = <X,Y><Y,X> / (<X,X><Y,Y>), the convention
// under which a_t translates its axis at unit speed, the Busemann cocycle
// has the closed form below, and sectional curvature lies in [-4,-1].

#include <chdim/heisenberg.hpp>

namespace chdim {

struct GromovMetricTag {
  HPoint base;
};
struct SphericalMetricTag {};

// hyperbolic distance between interior points
double dist(const HPoint& x, const HPoint& y, const HermitianSpace& S);

// b_xi(x,y) = log(|<Xi,X>|/|<Xi,Y>|) + (1/2) log(<Y,Y>/<X,X>)
double busemann(const BoundaryPoint& xi, const HPoint& x, const HPoint& y,
                const HermitianSpace& S);

// e^{-s} Xi' + e^{s} H' with <Xi',H'> = 1/2 real; unit-speed, -> eta as s -> +inf
HPoint geodesic_point(const BoundaryPoint& xi, const BoundaryPoint& eta, double s,
                      const HermitianSpace& S);

// d_x(xi,eta) = exp(-(b_xi(x,p)+b_eta(x,p))/2), p on the geodesic (xi,eta);
// throws for coinciding points
double gromov_dist(const GromovMetricTag& tag, const BoundaryPoint& xi,
                   const BoundaryPoint& eta, const HermitianSpace& S);

// total variant: 0 for projectively equal points
double gromov_dist_total(const GromovMetricTag& tag, const BoundaryPoint& xi,
                         const BoundaryPoint& eta, const HermitianSpace& S);

// chordal metric on the ball-chart sphere: |w - w'| with z ~ (1, w), |w| = 1
double spherical_dist(const BoundaryPoint& xi, const BoundaryPoint& eta);

// unit-sphere chart vector w (length n); Euclidean coordinates for the
// spherical metric class
VecC spherical_chart(const BoundaryPoint& xi);
BoundaryPoint from_spherical_chart(const VecC& w, const HermitianSpace& S);

BoundaryPoint boundary_act(const GroupElement& g, const BoundaryPoint& xi,
                           const HermitianSpace& S);
HPoint interior_act(const GroupElement& g, const HPoint& x, const HermitianSpace& S);

// --- Iwasawa frame -----------------------------------------------------------

// Fixed frame: xi_plus is the AN-fixed point, xi_minus the other A-fixed
// point, o the ball-model center (on the A-axis). The Cayley involution C
// conjugates the ball form to the Siegel-adapted antidiagonal form; the N
// and A matrices are written there and pulled back.
struct IwasawaFrame {
  HermitianSpace space;
  MatC cayley;    // C = C^{-1}, C^* J_siegel C = J_ball
  MatC j_siegel;
  BoundaryPoint xi_plus, xi_minus;
  HPoint origin;

  static IwasawaFrame standard(const HermitianSpace& S);

  // a_t = diag(e^{-t}, I, e^{t}) in Siegel coordinates (ball-model output);
  // satisfies a_{-t} n(v,s) a_t = n(h_{e^t}(v,s)) and d(o, a_t o) = |t|.
  GroupElement a_matrix(double t) const;

  // Heisenberg translation n(v,s); group homomorphism H_n -> PU(1,n)
  GroupElement n_matrix(const HeisPoint& h) const;

  // boundary chart phi(h) = n(h) . xi_minus, infinity -> xi_plus
  BoundaryPoint from_heis(const HeisPoint& h) const;
  HeisPoint to_heis(const BoundaryPoint& xi) const;  // xi_plus -> infinity
};

// phi_g(h) = (g n(h)) . xi_minus; bijective onto the boundary minus g.xi_plus
BoundaryPoint phi_chart(const GroupElement& g, const IwasawaFrame& F, const HeisPoint& h);
HeisPoint phi_chart_inv(const GroupElement& g, const IwasawaFrame& F, const BoundaryPoint& xi);

}  // namespace chdim

#pragma once

// shared helpers for the test suites

#include <chdim/dimension.hpp>
#include <chdim/experiment.hpp>

namespace chdim::testing {

inline HeisPoint rand_heis(Rng& rng, int n, double scale) {
  VecC v(n - 1);
  for (int i = 0; i < n - 1; ++i) v(i) = scale * rng.gauss_c();
  return HeisPoint(std::move(v), scale * rng.gauss());
}

inline BoundaryPoint rand_boundary(Rng& rng, const HermitianSpace& S) {
  VecC w(S.n);
  for (int i = 0; i < S.n; ++i) w(i) = rng.gauss_c();
  w /= w.norm();
  return from_spherical_chart(w, S);
}

inline HPoint rand_interior(Rng& rng, const HermitianSpace& S, double rmax = 0.8) {
  VecC w(S.n);
  for (int i = 0; i < S.n; ++i) w(i) = rng.gauss_c();
  w *= rng.uniform(0.0, rmax) / w.norm();
  VecC z(S.n + 1);
  z(0) = cplx(1, 0);
  z.tail(S.n) = w;
  return make_hpoint(z, S);
}

inline GroupElement rand_isometry(Rng& rng, const HermitianSpace& S, double scale = 0.6) {
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

// a small verified system cached across tests (construction is the slow part)
const SchottkyDescriptor& bundled_small_descriptor();

}  // namespace chdim::testing

#pragma once

// Linear algebra over the Hermitian form of signature (1,n): form
// evaluation, isometry validation/renormalization, eigenstructure
// classification of isometries, fixed boundary points.
//
// Conventions (fixed once, everything downstream depends on them):
//   * form_eval(x,y) = x^* J y  — conjugate-linear in the first slot.
//   * canonical ball form J = diag(1, -1, ..., -1); interior points are the
//     positive lines, scaled to <z,z> = +1.
//   * boundary points are null lines, canonicalized to unit Euclidean norm
//     with the first coordinate real positive (for ball-model null vectors
//     |z_0| = |z|/sqrt(2), so that coordinate never degenerates).

#include <chdim/base.hpp>

namespace chdim {

struct HermitianSpace {
  int n = 2;  // complex dimension of the hyperbolic space
  MatC J;     // (n+1) x (n+1), self-adjoint, signature (1,n)

  static HermitianSpace ball(int n);

  int dim() const { return n + 1; }
  // residual of the two type invariants (self-adjointness, signature)
  void validate() const;
};

enum class IsometryKind { unknown, elliptic, parabolic, hyperbolic };

const char* to_string(IsometryKind k);

struct GroupElement {
  MatC m;
  mutable IsometryKind kind = IsometryKind::unknown;

  GroupElement() = default;
  explicit GroupElement(MatC mm) : m(std::move(mm)) {}
};

struct HPoint {
  VecC z;  // scaled so <z,z> = +1
};

struct BoundaryPoint {
  VecC z;  // null, unit norm, first coordinate real positive
};

// --- form ------------------------------------------------------------------

cplx form_eval(const VecC& x, const VecC& y, const HermitianSpace& S);

// max-abs residual of g^* J g - J
double isometry_residual(const GroupElement& g, const HermitianSpace& S);

// --- constructors / canonicalization ---------------------------------------

// Interior point from a representative with <z,z> > 0; rescales to +1.
HPoint make_hpoint(const VecC& z, const HermitianSpace& S);

// Boundary point from a near-null representative: projects exactly onto the
// null cone (ball chart), then unit-norm + phase canonicalization.
// Rejects representatives with |<z,z>|/|z|^2 above `input_tol`.
BoundaryPoint make_boundary_point(const VecC& z, const HermitianSpace& S,
                                  double input_tol = 1e-6);

// plain-vector projective equality distance (both canonical)
double projective_distance(const BoundaryPoint& a, const BoundaryPoint& b);

// min over phases of ||A - e^{i phi} B||_F; projective comparison of matrices
double projective_matrix_distance(const MatC& a, const MatC& b);

// --- group operations -------------------------------------------------------

GroupElement group_mul(const GroupElement& a, const GroupElement& b);

// exact inverse of a J-unitary element: g^{-1} = J g^* J (J^2 = I)
GroupElement group_inverse(const GroupElement& g, const HermitianSpace& S);

// Newton iteration for the J-polar factor; restores g^*Jg = J to 1e-12.
// Throws conditioning_error when the input residual exceeds the ledger bound.
GroupElement normalize_isometry(const GroupElement& g, const HermitianSpace& S);

// g^k by binary powering with renormalization
GroupElement group_pow(const GroupElement& g, unsigned k, const HermitianSpace& S);

// --- spectral classification ------------------------------------------------

IsometryKind classify(const GroupElement& g, const HermitianSpace& S);

struct FixedPoints {
  BoundaryPoint attracting;
  BoundaryPoint repelling;
};

// For hyperbolic g: eigenvectors of the largest/smallest-modulus eigenvalues.
FixedPoints fixed_boundary_points(const GroupElement& g, const HermitianSpace& S);

struct TranslationLength {
  double value = 0;                                  // d(o, g^k o) / k
  std::vector<std::pair<unsigned, double>> by_step;  // (k_j, estimate) along doublings
};

// Forward-declared here, defined in hyperbolic.cpp (needs dist()).
TranslationLength translation_length(const GroupElement& g, const HPoint& o,
                                     unsigned k, const HermitianSpace& S);

}  // namespace chdim

#include <chdim/hermitian.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <cstdio>
#include <cstdlib>

namespace chdim {

std::string hex_double(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%a", x);
  return std::string(buf);
}

double parse_hex_double(const std::string& s) {
  const char* p = s.c_str();
  char* end = nullptr;
  double v = std::strtod(p, &end);
  if (end == p) throw input_error("bad float literal: " + s);
  return v;
}

const char* to_string(IsometryKind k) {
  switch (k) {
    case IsometryKind::elliptic: return "elliptic";
    case IsometryKind::parabolic: return "parabolic";
    case IsometryKind::hyperbolic: return "hyperbolic";
    default: return "unknown";
  }
}

HermitianSpace HermitianSpace::ball(int n) {
  if (n < 1) throw input_error("HermitianSpace: n must be >= 1");
  HermitianSpace S;
  S.n = n;
  S.J = MatC::Identity(n + 1, n + 1);
  for (int i = 1; i <= n; ++i) S.J(i, i) = cplx(-1, 0);
  return S;
}

void HermitianSpace::validate() const {
  if (J.rows() != n + 1 || J.cols() != n + 1)
    throw input_error("HermitianSpace: J has wrong shape");
  double sa = (J - J.adjoint()).cwiseAbs().maxCoeff();
  if (sa > tol().form_self_adjoint)
    throw input_error("HermitianSpace: J is not self-adjoint");
  Eigen::SelfAdjointEigenSolver<MatC> es(J);
  int pos = 0, neg = 0;
  for (int i = 0; i <= n; ++i) {
    double ev = es.eigenvalues()(i);
    if (ev > 0) ++pos;
    else if (ev < 0) ++neg;
  }
  if (pos != 1 || neg != n)
    throw input_error("HermitianSpace: signature is not (1,n)");
}

cplx form_eval(const VecC& x, const VecC& y, const HermitianSpace& S) {
  if (x.size() != S.n + 1 || y.size() != S.n + 1)
    throw input_error("form_eval: dimension mismatch");
  return (x.adjoint() * S.J * y)(0, 0);
}

double isometry_residual(const GroupElement& g, const HermitianSpace& S) {
  return (g.m.adjoint() * S.J * g.m - S.J).cwiseAbs().maxCoeff();
}

HPoint make_hpoint(const VecC& z, const HermitianSpace& S) {
  cplx q = (z.adjoint() * S.J * z)(0, 0);
  if (q.real() <= 0)
    throw domain_error("make_hpoint: representative is not an interior point");
  HPoint p;
  p.z = z / std::sqrt(q.real());
  return p;
}

BoundaryPoint make_boundary_point(const VecC& z, const HermitianSpace& S, double input_tol) {
  double nz = z.norm();
  if (!(nz > 0)) throw domain_error("make_boundary_point: zero vector");
  cplx q = (z.adjoint() * S.J * z)(0, 0);
  if (std::abs(q) > input_tol * nz * nz)
    throw domain_error("make_boundary_point: representative is not null");
  VecC v = z;
  // exact null projection in the ball chart: |v_0| = |w| where w = tail
  double head = std::abs(v(0));
  double tail = v.tail(S.n).norm();
  if (head <= 0 || tail <= 0)
    throw domain_error("make_boundary_point: degenerate null representative");
  v.tail(S.n) *= head / tail;
  // canonical scale: unit norm, first coordinate real positive
  v /= v.norm();
  cplx ph = v(0) / std::abs(v(0));
  v *= std::conj(ph);
  v(0) = cplx(v(0).real(), 0.0);  // strip rounding residue in Im
  BoundaryPoint p;
  p.z = v;
  return p;
}

double projective_distance(const BoundaryPoint& a, const BoundaryPoint& b) {
  return (a.z - b.z).norm();
}

double projective_matrix_distance(const MatC& a, const MatC& b) {
  // min_phi ||a - e^{i phi} b||_F, closed form via the trace inner product
  cplx ip = (b.array().conjugate() * a.array()).sum();
  double na2 = a.squaredNorm(), nb2 = b.squaredNorm();
  double d2 = na2 + nb2 - 2.0 * std::abs(ip);
  return std::sqrt(std::max(0.0, d2));
}

GroupElement group_mul(const GroupElement& a, const GroupElement& b) {
  return GroupElement(a.m * b.m);
}

GroupElement group_inverse(const GroupElement& g, const HermitianSpace& S) {
  return GroupElement(S.J * g.m.adjoint() * S.J);
}

namespace {
// The form residual of X scales like |X|^2 at machine precision, so the
// meaningful measure for large words is relative to that scale.
double residual_scale(const MatC& x) {
  double m = x.cwiseAbs().maxCoeff();
  return std::max(1.0, m * m);
}
}  // namespace

GroupElement normalize_isometry(const GroupElement& g, const HermitianSpace& S) {
  // Newton aims well below the contract bound so that the absolute residual
  // stays within 1e-12 for matrices of moderate norm; the acceptance and
  // failure bounds are relative to |X|^2 so long words stay admissible.
  const double aim = 6e-14;
  double scale = residual_scale(g.m);
  double r0 = isometry_residual(g, S) / scale;
  if (!(r0 <= tol().normalize_input))
    throw conditioning_error("normalize_isometry: residual " + std::to_string(r0) +
                             " above acceptance bound (word too long or degenerate)");
  if (r0 <= aim) {
    GroupElement out = g;
    return out;  // already tight; a Newton step on an ill-conditioned word
                 // would only stir rounding noise
  }
  MatC x = g.m;
  double best = r0;
  MatC best_x = x;
  for (int it = 0; it < 12; ++it) {
    MatC xinv = x.inverse();
    x = 0.5 * (x + S.J * xinv.adjoint() * S.J);
    double r = (x.adjoint() * S.J * x - S.J).cwiseAbs().maxCoeff() / residual_scale(x);
    if (r < best) {
      best = r;
      best_x = x;
    }
    if (r <= aim || r >= best * 4) break;
  }
  GroupElement out(std::move(best_x));
  out.kind = g.kind;
  if (!(best <= tol().normalize_target))
    throw conditioning_error("normalize_isometry: failed to reach target residual");
  return out;
}

GroupElement group_pow(const GroupElement& g, unsigned k, const HermitianSpace& S) {
  GroupElement acc(MatC::Identity(S.dim(), S.dim()));
  GroupElement base = g;
  while (k > 0) {
    if (k & 1u) acc = normalize_isometry(group_mul(acc, base), S);
    k >>= 1u;
    if (k) base = normalize_isometry(group_mul(base, base), S);
  }
  return acc;
}

namespace {

struct Spectrum {
  VecC values;
  MatC vectors;
};

Spectrum eigen_decompose(const MatC& m) {
  Eigen::ComplexEigenSolver<MatC> es;
  es.compute(m, /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success)
    throw numeric_error("eigen-solver failed to converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

}  // namespace

IsometryKind classify(const GroupElement& g, const HermitianSpace& S) {
  if (g.kind != IsometryKind::unknown) return g.kind;
  const double t = tol().classify;
  Spectrum sp = eigen_decompose(g.m);
  const int d = S.dim();

  double max_mod = 0;
  for (int i = 0; i < d; ++i) max_mod = std::max(max_mod, std::abs(sp.values(i)));
  // Defective (parabolic) spectra perturb like (eps |g|)^{1/3} under any
  // backward-stable eigensolver, so computed moduli of unipotents land up
  // to ~1e-5 off the circle; hyperbolicity below that floor is not
  // certifiable in doubles. The effective threshold is the larger of the
  // class-separation tolerance and the noise floor.
  double scale = std::max(1.0, g.m.cwiseAbs().maxCoeff());
  const double noise_floor = 64.0 * std::cbrt(2.3e-16 * scale);
  if (max_mod > 1.0 + std::max(t, noise_floor)) {
    g.kind = IsometryKind::hyperbolic;
    return g.kind;
  }

  // all eigenvalue moduli ~ 1 here (J-unitary spectra pair as lambda, 1/conj
  // lambda); elliptic iff diagonalizable: geometric multiplicity must match
  // the cluster size for every eigenvalue cluster. Clustering has to sit
  // above the defective-spectrum noise floor (~ eps^{1/3}).
  const double cluster_tol = std::max(64 * t, noise_floor);
  std::vector<int> cluster(d, -1);
  int nclusters = 0;
  for (int i = 0; i < d; ++i) {
    if (cluster[i] >= 0) continue;
    cluster[i] = nclusters;
    for (int j = i + 1; j < d; ++j)
      if (cluster[j] < 0 && std::abs(sp.values(i) - sp.values(j)) <= cluster_tol)
        cluster[j] = nclusters;
    ++nclusters;
  }
  for (int c = 0; c < nclusters; ++c) {
    cplx lam(0, 0);
    int sz = 0;
    for (int i = 0; i < d; ++i)
      if (cluster[i] == c) {
        lam += sp.values(i);
        ++sz;
      }
    lam /= double(sz);
    if (sz == 1) continue;  // simple eigenvalue, always diagonalizable
    Eigen::JacobiSVD<MatC> svd(g.m - lam * MatC::Identity(d, d));
    int rank = 0;
    for (int i = 0; i < d; ++i)
      if (svd.singularValues()(i) > 2 * cluster_tol * scale) ++rank;
    int geometric = d - rank;
    if (geometric < sz) {
      g.kind = IsometryKind::parabolic;
      return g.kind;
    }
  }
  g.kind = IsometryKind::elliptic;
  return g.kind;
}

namespace {
// dominant eigenvector: the only spectral data that stays accurate for
// widely spread eigenvalue moduli (long words spread like e^{+-c l})
VecC dominant_eigenvector(const MatC& m) {
  Spectrum sp = eigen_decompose(m);
  int imax = 0;
  for (int i = 1; i < m.rows(); ++i)
    if (std::abs(sp.values(i)) > std::abs(sp.values(imax))) imax = i;
  return sp.vectors.col(imax);
}
}  // namespace

FixedPoints fixed_boundary_points(const GroupElement& g, const HermitianSpace& S) {
  if (classify(g, S) != IsometryKind::hyperbolic)
    throw domain_error("fixed_boundary_points: element is not hyperbolic");
  FixedPoints fp;
  fp.attracting =
      make_boundary_point(dominant_eigenvector(g.m), S, tol().boundary_null_input);
  // the smallest-modulus eigenvector of g is the dominant one of g^{-1},
  // which is exact for J-unitary matrices
  fp.repelling = make_boundary_point(dominant_eigenvector(group_inverse(g, S).m), S,
                                     tol().boundary_null_input);
  return fp;
}

}  // namespace chdim

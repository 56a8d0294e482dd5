#include <chdim/schottky.hpp>

#include <sstream>

namespace chdim {

// --- words -------------------------------------------------------------------

std::uint64_t reduced_word_count_exact(int k, int l) {
  if (l == 0) return 1;
  std::uint64_t c = std::uint64_t(2 * k);
  for (int i = 1; i < l; ++i) c *= std::uint64_t(2 * k - 1);
  return c;
}

std::uint64_t reduced_word_count_upto(int k, int L) {
  std::uint64_t total = 1;
  for (int l = 1; l <= L; ++l) total += reduced_word_count_exact(k, l);
  return total;
}

void enumerate_reduced_words(int k, int L, const std::function<void(const Word&)>& visit) {
  if (k < 1) throw input_error("enumerate_reduced_words: k must be >= 1");
  if (L < 0) throw input_error("enumerate_reduced_words: L must be >= 0");
  Word w;
  visit(w);
  // iterative DFS in letter-id order; words of every length <= L are visited
  // in (length-major via recursion order? no: prefix order). Prefix order is
  // what the matrix-product consumers need; length-major materialization is
  // done by reduced_words().
  std::function<void(void)> rec = [&]() {
    if (int(w.letters.size()) == L) return;
    int8_t forbidden = w.letters.empty() ? 0 : letter_inverse(w.letters.back());
    for (int id = 0; id < 2 * k; ++id) {
      int8_t letter = id_letter(id);
      if (letter == forbidden) continue;
      w.letters.push_back(letter);
      visit(w);
      rec();
      w.letters.pop_back();
    }
  };
  rec();
}

std::vector<Word> reduced_words(int k, int L) {
  std::vector<std::vector<Word>> by_len(L + 1);
  enumerate_reduced_words(k, L, [&](const Word& w) { by_len[w.length()].push_back(w); });
  std::vector<Word> out;
  out.reserve(reduced_word_count_upto(k, L));
  for (auto& bucket : by_len)
    for (auto& w : bucket) out.push_back(std::move(w));
  return out;
}

// --- descriptor helpers ------------------------------------------------------

GroupElement SchottkyDescriptor::letter_element(int8_t letter, const HermitianSpace& S) const {
  int i = std::abs(int(letter)) - 1;
  if (i < 0 || i >= int(gens.size())) throw input_error("letter out of range");
  if (letter > 0) return gens[i];
  return group_inverse(gens[i], S);
}

GroupElement SchottkyDescriptor::word_element(const Word& w, const HermitianSpace& S) const {
  GroupElement acc(MatC::Identity(S.dim(), S.dim()));
  for (int8_t l : w.letters) acc = normalize_isometry(group_mul(acc, letter_element(l, S)), S);
  return acc;
}

// --- samplers ----------------------------------------------------------------

std::vector<BoundaryPoint> sample_sphere(const HermitianSpace& S, int count, Rng rng) {
  std::vector<BoundaryPoint> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    VecC w(S.n);
    for (int j = 0; j < S.n; ++j) w(j) = rng.gauss_c();
    double nw = w.norm();
    if (nw < 1e-12) {
      w.setZero();
      w(0) = cplx(1, 0);
      nw = 1;
    }
    out.push_back(from_spherical_chart(w / nw, S));
  }
  return out;
}

std::vector<BoundaryPoint> sample_cap_boundary(const SphericalBall& ball, int count,
                                               const HermitianSpace& S, Rng rng) {
  // The spherical ball is a cap on S^{2n-1} in R^{2n}; its boundary points
  // are cos(a) c + sin(a) u with u a unit tangent at the center c and
  // chordal radius r = 2 sin(a/2).
  const VecC c = spherical_chart(ball.center);
  double r = std::min(ball.radius, 1.999);
  double alpha = 2.0 * std::asin(0.5 * r);
  std::vector<BoundaryPoint> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    VecC u(S.n);
    for (int j = 0; j < S.n; ++j) u(j) = rng.gauss_c();
    // orthogonalize against c in the real sense (chordal geometry is real)
    cplx ip = c.dot(u);  // conj(c) . u ; real part = real inner product
    u -= c * cplx(ip.real(), 0);
    double nu = u.norm();
    if (nu < 1e-12) continue;
    u /= nu;
    VecC w = std::cos(alpha) * c + std::sin(alpha) * u;
    out.push_back(from_spherical_chart(w, S));
  }
  return out;
}

double chain_point_clearance(const Chain& c, const BoundaryPoint& x, int samples,
                             const HermitianSpace& S) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    BoundaryPoint p = chain_point(c, 2.0 * M_PI * double(i) / double(samples), S);
    best = std::min(best, spherical_dist(p, x));
  }
  return best;
}

// --- construction ------------------------------------------------------------

namespace {

GroupElement random_isometry(const HermitianSpace& S, Rng& rng, double scale) {
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
  // Cayley transform of a Lie-algebra direction X = J S: exactly J-unitary
  MatC x = S.J * skew;
  MatC id = MatC::Identity(d, d);
  MatC g = (id + x) * (id - x).inverse();
  return normalize_isometry(GroupElement(std::move(g)), S);
}

struct Axes {
  GroupElement seed_elem;  // w_i'
  BoundaryPoint fix_plus, fix_minus;
};

}  // namespace

SchottkyDescriptor build_good_position(const HermitianSpace& S, int k,
                                       std::uint64_t seed, const BuildParams& params) {
  if (k < 2) throw input_error("build_good_position: k must be >= 2");
  if (S.n < 2) throw input_error("build_good_position: n must be >= 2");
  IwasawaFrame F = IwasawaFrame::standard(S);
  Rng rng(seed);
  GroupElement a0 = F.a_matrix(params.t0);

  // Step 1: hyperbolic seeds w_i' = c_i a c_i^{-1} whose fixed-point chains
  // avoid the other seeds' fixed points with the configured margin.
  std::vector<Axes> axes;
  const int chain_samples = 256;
  int attempts = 0;
  while (int(axes.size()) < k) {
    if (++attempts > 400 * k)
      throw construction_error("build_good_position: could not separate fixed-point chains");
    Axes cand;
    if (params.force_shared_chain && !axes.empty()) {
      // negative control: conjugate by a rotation of the xi-/xi+ chain
      // circle (phase on the last ball coordinate), so every generator's
      // fixed points land on that one chain
      MatC mix = MatC::Identity(S.dim(), S.dim());
      double phi = M_PI * double(axes.size()) / double(k);
      mix(S.n, S.n) = std::polar(1.0, phi);
      GroupElement shear(std::move(mix));
      cand.seed_elem = normalize_isometry(
          group_mul(group_mul(shear, a0), group_inverse(shear, S)), S);
    } else if (axes.empty() && params.force_shared_chain) {
      cand.seed_elem = a0;
    } else {
      GroupElement c = random_isometry(S, rng, params.conjugator_scale);
      cand.seed_elem =
          normalize_isometry(group_mul(group_mul(c, a0), group_inverse(c, S)), S);
    }
    if (classify(cand.seed_elem, S) != IsometryKind::hyperbolic) continue;
    FixedPoints fp = fixed_boundary_points(cand.seed_elem, S);
    cand.fix_plus = fp.attracting;
    cand.fix_minus = fp.repelling;

    if (!params.force_shared_chain) {
      // keep the 2k fixed points well spread; tight centers force tiny
      // domains and therefore huge powers
      if (spherical_dist(cand.fix_plus, cand.fix_minus) < params.center_margin) continue;
      bool ok = true;
      for (const Axes& other : axes) {
        double gap = std::min(
            std::min(spherical_dist(cand.fix_plus, other.fix_plus),
                     spherical_dist(cand.fix_plus, other.fix_minus)),
            std::min(spherical_dist(cand.fix_minus, other.fix_plus),
                     spherical_dist(cand.fix_minus, other.fix_minus)));
        if (gap < params.center_margin) {
          ok = false;
          break;
        }
      }
      Chain cchain = chain_through(cand.fix_plus, cand.fix_minus, S);
      for (const Axes& other : axes) {
        if (!ok) break;
        Chain ochain = chain_through(other.fix_plus, other.fix_minus, S);
        double m1 = std::min(chain_point_clearance(cchain, other.fix_plus, chain_samples, S),
                             chain_point_clearance(cchain, other.fix_minus, chain_samples, S));
        double m2 = std::min(chain_point_clearance(ochain, cand.fix_plus, chain_samples, S),
                             chain_point_clearance(ochain, cand.fix_minus, chain_samples, S));
        if (std::min(m1, m2) < params.chain_margin) ok = false;
      }
      if (!ok) continue;
    }
    axes.push_back(std::move(cand));
  }

  // Step 2: domains. Fixed points do not move under powering, so centers
  // and radii are chosen once.
  std::vector<BoundaryPoint> centers;
  for (const Axes& a : axes) {
    centers.push_back(a.fix_plus);
    centers.push_back(a.fix_minus);
  }
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < centers.size(); ++i)
    for (std::size_t j = i + 1; j < centers.size(); ++j)
      min_gap = std::min(min_gap, spherical_dist(centers[i], centers[j]));

  SchottkyDescriptor D;
  D.n = S.n;
  D.k = k;
  D.seed = seed;
  D.t0 = params.t0;

  double radius_factor = params.radius_factor;
  for (int shrink = 0; shrink < 4; ++shrink, radius_factor *= 0.5) {
    double radius = radius_factor * min_gap;
    D.domains.clear();
    for (std::size_t i = 0; i < centers.size(); ++i)
      D.domains.push_back(SphericalBall{centers[i], radius});

    // Step 3: escalate the power m until ping-pong verifies.
    for (unsigned m = 1; m <= params.power_cap; m *= 2) {
      D.power = m;
      D.gens.clear();
      for (const Axes& a : axes) D.gens.push_back(group_pow(a.seed_elem, m, S));

      PingPongReport pp = verify_ping_pong(D, params.resolution, S);
      D.verification.cond1 = pp.cond1;
      D.verification.cond2 = pp.cond2;
      D.verification.cond3 = pp.cond3;
      D.verification.resolution = params.resolution;
      D.verification.domain_margin = pp.domain_margin;
      D.verification.pingpong_margin = pp.margin;
      D.verification.witness = pp.witness;
      if (!pp.cond1 || !pp.cond2) break;  // power-independent, no point escalating
      if (!pp.cond3) continue;

      TripleChainReport tc =
          verify_no_triple_chain(D, params.chain_resolution, params.margin, S);
      D.verification.cond4 = tc.pass;
      D.verification.chain_resolution = params.chain_resolution;
      D.verification.chain_clearance = tc.clearance;
      D.verification.chain_margin = params.margin;
      if (!tc.pass) {
        D.verification.witness = tc.witness;
        break;  // chain geometry is power-independent; shrink domains instead
      }
      return D;  // all four conditions verified
    }
    if (params.force_shared_chain) break;  // negative control: report the failure
  }
  if (params.force_shared_chain) return D;  // caller inspects the failed record
  throw construction_error(
      "build_good_position: escalation cap exhausted without verification (seed " +
      std::to_string(seed) + ")");
}

// --- verification ------------------------------------------------------------

PingPongReport verify_ping_pong(const SchottkyDescriptor& D, int resolution,
                                const HermitianSpace& S) {
  PingPongReport rep;
  const int k = D.k;
  if (int(D.gens.size()) != k || int(D.domains.size()) != 2 * k)
    throw input_error("verify_ping_pong: descriptor is incomplete");

  // condition 1: no generator is another's inverse (projective comparison)
  rep.cond1 = true;
  for (int i = 0; i < k && rep.cond1; ++i)
    for (int j = 0; j < k && rep.cond1; ++j) {
      if (i == j) continue;
      double d = projective_matrix_distance(D.gens[i].m,
                                            group_inverse(D.gens[j], S).m);
      if (d < 1e-6) {
        rep.cond1 = false;
        rep.witness = "generators " + std::to_string(i + 1) + " and " +
                      std::to_string(j + 1) + " are mutually inverse";
      }
    }

  // condition 2: closed domains pairwise disjoint, with margin
  rep.domain_margin = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 2 * k; ++a)
    for (int b = a + 1; b < 2 * k; ++b) {
      double gap = spherical_dist(D.domains[a].center, D.domains[b].center) -
                   D.domains[a].radius - D.domains[b].radius;
      rep.domain_margin = std::min(rep.domain_margin, gap);
    }
  rep.cond2 = rep.domain_margin > 0;
  if (!rep.cond2 && rep.witness.empty()) rep.witness = "domain closures overlap";

  if (!rep.cond1 || !rep.cond2) return rep;

  // condition 3: w(complement of B(w^{-1})) inside B(w), sampled
  rep.margin = std::numeric_limits<double>::infinity();
  for (int id = 0; id < 2 * k; ++id) {
    int8_t letter = id_letter(id);
    GroupElement g = D.letter_element(letter, S);
    const SphericalBall& target = D.domain(letter);
    const SphericalBall& source_complement = D.domain(letter_inverse(letter));

    // nested deterministic sample set: quasi-uniform sphere samples plus the
    // boundary spheres of all other domains
    std::vector<BoundaryPoint> samples =
        sample_sphere(S, resolution, Rng(0x5eedu + std::uint64_t(id)));
    for (int other = 0; other < 2 * k; ++other) {
      if (other == letter_id(letter_inverse(letter))) continue;
      auto ring = sample_cap_boundary(D.domains[other], std::max(8, resolution / 8), S,
                                      Rng(0xca9u + std::uint64_t(37 * id + other)));
      samples.insert(samples.end(), ring.begin(), ring.end());
    }

    for (const BoundaryPoint& p : samples) {
      if (spherical_dist(p, source_complement.center) <= source_complement.radius)
        continue;  // inside B(w^{-1}): not part of the condition
      BoundaryPoint img = boundary_act(g, p, S);
      double margin = target.radius - spherical_dist(img, target.center);
      if (margin < rep.margin) rep.margin = margin;
      if (margin <= 0) {
        rep.cond3 = false;
        std::ostringstream os;
        os << "condition 3 witness: letter " << int(letter)
           << " maps a sample outside B(w) (margin " << margin << ")";
        rep.witness = os.str();
        return rep;
      }
    }
  }
  rep.cond3 = true;
  return rep;
}

TripleChainReport verify_no_triple_chain(const SchottkyDescriptor& D, int resolution,
                                         double margin, const HermitianSpace& S) {
  TripleChainReport rep;
  rep.margin = margin;
  rep.resolution = resolution;
  rep.clearance = std::numeric_limits<double>::infinity();
  const int m = int(D.domains.size());
  const int chain_samples = 128;

  // sample grid per ball: center plus rings at r/2 and r, nested in the
  // angular resolution (power-of-two angles keep monotonicity exact)
  auto ball_grid = [&](const SphericalBall& b) {
    std::vector<BoundaryPoint> pts;
    pts.push_back(b.center);
    for (double frac : {0.5, 1.0}) {
      SphericalBall ring{b.center, b.radius * frac};
      auto ringpts = sample_cap_boundary(ring, resolution, S,
                                         Rng(0x717au + fnv1a(&frac, sizeof frac)));
      pts.insert(pts.end(), ringpts.begin(), ringpts.end());
    }
    return pts;
  };

  std::vector<std::vector<BoundaryPoint>> grids;
  grids.reserve(m);
  for (const auto& b : D.domains) grids.push_back(ball_grid(b));

  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        if (c == a || c == b) continue;
        const SphericalBall& third = D.domains[c];
        for (const BoundaryPoint& p : grids[a])
          for (const BoundaryPoint& q : grids[b]) {
            if (projective_distance(p, q) < tol().projective_eq) continue;
            Chain ch = chain_through(p, q, S);
            double clear_c =
                chain_point_clearance(ch, third.center, chain_samples, S) - third.radius;
            if (clear_c < rep.clearance) {
              rep.clearance = clear_c;
              if (clear_c <= margin) {
                std::ostringstream os;
                os << "triple (" << a << "," << b << "," << c
                   << "): chain through sampled pair clears third domain by " << clear_c;
                rep.witness = os.str();
              }
            }
          }
      }
  rep.pass = rep.clearance > margin;
  return rep;
}

// --- word machinery ----------------------------------------------------------

SphericalBall word_domain(const SchottkyDescriptor& D, const Word& f,
                          const HermitianSpace& S) {
  if (f.empty()) throw input_error("word_domain: word must be nonempty");
  const SphericalBall& last = D.domain(f.letters.back());

  GroupElement prefix(MatC::Identity(S.dim(), S.dim()));
  for (std::size_t i = 0; i + 1 < f.letters.size(); ++i)
    prefix = normalize_isometry(group_mul(prefix, D.letter_element(f.letters[i], S)), S);

  BoundaryPoint center = boundary_act(prefix, last.center, S);
  auto ring = sample_cap_boundary(last, 32, S, Rng(0xb0a7u));
  double radius = 0;
  for (const BoundaryPoint& p : ring) {
    BoundaryPoint img = boundary_act(prefix, p, S);
    radius = std::max(radius, spherical_dist(img, center));
  }
  return SphericalBall{center, radius * 1.1};
}

const char* to_string(LimitMode m) {
  switch (m) {
    case LimitMode::word_fixed_points: return "word-fixed-points";
    case LimitMode::nested_centers: return "nested-centers";
    default: return "orbit-of-point";
  }
}

LimitMode limit_mode_from_string(const std::string& s) {
  if (s == "word-fixed-points") return LimitMode::word_fixed_points;
  if (s == "nested-centers") return LimitMode::nested_centers;
  if (s == "orbit-of-point") return LimitMode::orbit_of_point;
  throw input_error("unknown limit mode: " + s);
}

PointCloud limit_points(const SchottkyDescriptor& D, int L, LimitMode mode,
                        const IwasawaFrame& F) {
  const HermitianSpace& S = F.space;
  if (L < 1) throw input_error("limit_points: L must be >= 1");
  if (!D.verification.all())
    throw input_error("limit_points: descriptor is not fully verified");
  PointCloud cloud;
  cloud.word_length = L;
  cloud.seed = D.seed;
  cloud.mode = mode;

  BoundaryPoint xi0 = D.domains[0].center;  // attracting point of gens[0]

  // stack of prefix products along the DFS
  std::vector<GroupElement> stack;
  stack.emplace_back(GroupElement(MatC::Identity(S.dim(), S.dim())));

  std::function<void(int8_t)> descend = [&](int8_t letter) {
    stack.push_back(
        normalize_isometry(group_mul(stack.back(), D.letter_element(letter, S)), S));
  };

  std::function<void(Word&)> rec = [&](Word& w) {
    if (int(w.length()) == L) {
      try {
        BoundaryPoint p = [&] {
          switch (mode) {
            case LimitMode::word_fixed_points:
              return fixed_boundary_points(stack.back(), S).attracting;
            case LimitMode::nested_centers: {
              // push of the last letter's domain center through the prefix:
              // dispense with word_domain's ring, the center is what we keep
              return boundary_act(stack[stack.size() - 2],
                                  D.domain(w.letters.back()).center, S);
            }
            default:
              return boundary_act(stack.back(), xi0, S);
          }
        }();
        cloud.points.push_back(std::move(p));
      } catch (const std::exception&) {
        ++cloud.skipped;
      }
      return;
    }
    int8_t forbidden = w.letters.empty() ? 0 : letter_inverse(w.letters.back());
    for (int id = 0; id < 2 * D.k; ++id) {
      int8_t letter = id_letter(id);
      if (letter == forbidden) continue;
      w.letters.push_back(letter);
      descend(letter);
      rec(w);
      stack.pop_back();
      w.letters.pop_back();
    }
  };
  Word w;
  rec(w);

  cloud.heis.reserve(cloud.points.size());
  cloud.sph.reserve(cloud.points.size());
  for (const BoundaryPoint& p : cloud.points) {
    cloud.heis.push_back(F.to_heis(p));
    cloud.sph.push_back(spherical_chart(p));
  }
  return cloud;
}

std::vector<double> orbit_distances(const SchottkyDescriptor& D, int L,
                                    const HPoint& o, const HermitianSpace& S) {
  std::vector<std::vector<double>> by_len(L + 1);
  for (int l = 0; l <= L; ++l) by_len[l].reserve(reduced_word_count_exact(D.k, l));

  std::vector<GroupElement> stack;
  stack.emplace_back(GroupElement(MatC::Identity(S.dim(), S.dim())));
  by_len[0].push_back(0.0);

  std::function<void(int, int8_t)> rec = [&](int depth, int8_t last) {
    if (depth == L) return;
    int8_t forbidden = last == 0 ? int8_t(0) : letter_inverse(last);
    for (int id = 0; id < 2 * D.k; ++id) {
      int8_t letter = id_letter(id);
      if (letter == forbidden) continue;
      stack.push_back(
          normalize_isometry(group_mul(stack.back(), D.letter_element(letter, S)), S));
      by_len[depth + 1].push_back(dist(o, interior_act(stack.back(), o, S), S));
      rec(depth + 1, letter);
      stack.pop_back();
    }
  };
  rec(0, 0);

  std::vector<double> out;
  out.reserve(reduced_word_count_upto(D.k, L));
  for (auto& bucket : by_len)
    for (double d : bucket) out.push_back(d);
  return out;
}

}  // namespace chdim

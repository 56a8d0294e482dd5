#pragma once

// Schottky systems in good position: generator synthesis by powered
// conjugates, ping-pong domain verification (conditions 1-3), the
// no-triple-chain condition (condition 4), reduced-word enumeration,
// word domains, limit-set sampling, orbital distances.
//
// Verification is sampling-based and margin-certified: reports state the
// resolution and the worst margin observed, never a proof.

#include <chdim/hyperbolic.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>

namespace chdim {

// --- words -------------------------------------------------------------------

// Letters are signed generator indices: +i for w_i, -i for w_i^{-1}
// (1-based). Reduced words never contain an adjacent (i, -i) pair.
struct Word {
  std::vector<int8_t> letters;
  bool reduced = true;

  std::size_t length() const { return letters.size(); }
  bool empty() const { return letters.empty(); }
};

// letter <-> dense id; enumeration order is by id: w_1, w_1^{-1}, w_2, ...
inline int letter_id(int8_t letter) {
  return letter > 0 ? 2 * (letter - 1) : 2 * (-letter - 1) + 1;
}
inline int8_t id_letter(int id) {
  return int8_t(id % 2 == 0 ? id / 2 + 1 : -(id / 2 + 1));
}
inline int8_t letter_inverse(int8_t letter) { return int8_t(-letter); }

// number of reduced words of length exactly l (k generators)
std::uint64_t reduced_word_count_exact(int k, int l);
// 1 + sum over 1..L
std::uint64_t reduced_word_count_upto(int k, int L);

// All reduced words of length <= L in deterministic order (by length, then
// lexicographic in letter ids). Includes the empty word.
std::vector<Word> reduced_words(int k, int L);

// Depth-first enumeration (same per-length lexicographic order) without
// materializing: visit(word) is called at every node, empty word included.
void enumerate_reduced_words(int k, int L, const std::function<void(const Word&)>& visit);

// --- descriptor --------------------------------------------------------------

struct SphericalBall {
  BoundaryPoint center;
  double radius = 0;  // chordal radius in the spherical metric
};

struct VerificationRecord {
  bool cond1 = false, cond2 = false, cond3 = false, cond4 = false;
  int resolution = 0;            // sample count used for condition 3
  int chain_resolution = 0;      // grid resolution used for condition 4
  double domain_margin = 0;      // min gap between closed domains (cond 2)
  double pingpong_margin = 0;    // min containment margin observed (cond 3)
  double chain_clearance = 0;    // min chain-to-third-domain gap (cond 4)
  double chain_margin = 0;       // margin requested for cond 4
  std::string witness;           // human-readable failure witness, if any

  bool all() const { return cond1 && cond2 && cond3 && cond4; }
};

struct SchottkyDescriptor {
  int n = 2;          // complex dimension
  int k = 2;          // generator count
  std::uint64_t seed = 0;
  unsigned power = 1;  // m with w_i = (w_i')^m
  double t0 = 1.0;     // translation length of the seed element
  std::vector<GroupElement> gens;     // w_1..w_k
  std::vector<SphericalBall> domains;  // indexed by letter_id: B(w), B(w^-1), ...
  VerificationRecord verification;
  std::string library_version = kLibraryVersion;
  std::string config_hash;  // hash of the building experiment config

  const SphericalBall& domain(int8_t letter) const { return domains[letter_id(letter)]; }

  // generator or inverse as a group element
  GroupElement letter_element(int8_t letter, const HermitianSpace& S) const;
  // product over a reduced word, renormalized stepwise
  GroupElement word_element(const Word& w, const HermitianSpace& S) const;
};

// bit-exact text round trip (hex-float JSON document)
std::string descriptor_to_text(const SchottkyDescriptor& d);
SchottkyDescriptor descriptor_from_text(const std::string& text, const HermitianSpace& S);

// --- construction ------------------------------------------------------------

struct BuildParams {
  double t0 = 1.0;              // seed translation length
  double conjugator_scale = 0.5;  // Lie-algebra spread of the random conjugators
  double chain_margin = 0.1;    // fixed-point chain separation (spherical)
  double center_margin = 0.55;  // min pairwise gap between the 2k fixed points
  double radius_factor = 0.35;  // domain radius as a fraction of min center gap
  unsigned power_cap = 64;      // escalation cap for m
  int resolution = 2048;        // condition-3 samples per letter
  int chain_resolution = 8;     // condition-4 grid (angles per ring)
  double margin = 0.02;         // condition-4 required clearance
  bool force_shared_chain = false;  // negative control: all axes on one chain
};

// Deterministic in (k, seed, params). Throws construction_error when the
// escalation cap is exhausted.
SchottkyDescriptor build_good_position(const HermitianSpace& S, int k,
                                       std::uint64_t seed, const BuildParams& params);

// --- verification ------------------------------------------------------------

struct PingPongReport {
  bool cond1 = false, cond2 = false, cond3 = false;
  double domain_margin = 0;
  double margin = 0;  // min over letters/samples of containment margin
  std::string witness;
  bool pass() const { return cond1 && cond2 && cond3; }
};

PingPongReport verify_ping_pong(const SchottkyDescriptor& S, int resolution,
                                const HermitianSpace& space);

struct TripleChainReport {
  bool pass = false;
  double clearance = 0;  // min over triples / pairs / chain samples
  double margin = 0;
  int resolution = 0;
  std::string witness;
};

// Conditions 1-3 are assumed verified. Semidecision: "verified at
// resolution r with margin m".
TripleChainReport verify_no_triple_chain(const SchottkyDescriptor& S, int resolution,
                                         double margin, const HermitianSpace& space);

// --- word machinery ----------------------------------------------------------

// Enclosing spherical ball for B(f) = f_1...f_{p-1} B(f_p): boundary sample
// of B(f_p) pushed through the prefix, smallest observed cap, 10% dilation.
SphericalBall word_domain(const SchottkyDescriptor& S, const Word& f,
                          const HermitianSpace& space);

enum class LimitMode { word_fixed_points, nested_centers, orbit_of_point };

const char* to_string(LimitMode m);
LimitMode limit_mode_from_string(const std::string& s);

struct PointCloud {
  std::vector<BoundaryPoint> points;
  std::vector<HeisPoint> heis;  // chart coordinates (frame of the space)
  std::vector<VecC> sph;        // unit-sphere chart vectors
  int word_length = 0;
  std::uint64_t seed = 0;
  LimitMode mode = LimitMode::word_fixed_points;
  std::size_t skipped = 0;  // words dropped due to conditioning errors
};

PointCloud limit_points(const SchottkyDescriptor& S, int L, LimitMode mode,
                        const IwasawaFrame& F);

// d(o, gamma o) for every reduced word of length <= L, in enumeration order
// (identity first). Deterministic.
std::vector<double> orbit_distances(const SchottkyDescriptor& S, int L,
                                    const HPoint& o, const HermitianSpace& space);

// deterministic quasi-uniform boundary samples (seeded)
std::vector<BoundaryPoint> sample_sphere(const HermitianSpace& S, int count, Rng rng);
// points on the cap boundary at chordal radius r around center
std::vector<BoundaryPoint> sample_cap_boundary(const SphericalBall& ball, int count,
                                               const HermitianSpace& S, Rng rng);

// min over chain samples of spherical distance to a point
double chain_point_clearance(const Chain& c, const BoundaryPoint& x, int samples,
                             const HermitianSpace& S);

}  // namespace chdim

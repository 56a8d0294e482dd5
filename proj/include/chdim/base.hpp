#pragma once

// Shared basics: Eigen typedefs, error taxonomy, tolerance ledger,
// portable seeded randomness, deterministic parallel helpers.

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace chdim {

inline constexpr const char* kLibraryVersion = "0.1.0";

using cplx = std::complex<double>;
using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;
using VecR = Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Error taxonomy. Mirrors the CLI exit-code classes: bad input / bad domain,
// conditioning loss, numeric failure, estimation failure, construction
// failure.
// ---------------------------------------------------------------------------
struct input_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct domain_error : std::domain_error {
  using std::domain_error::domain_error;
};
struct conditioning_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct estimation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct construction_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Tolerance ledger. One record, defaults fixed here; experiments never
// re-tune these silently.
// ---------------------------------------------------------------------------
struct Tolerances {
  double form_self_adjoint = 1e-14;
  double isometry_residual = 1e-10;   // accepted residual of g*Jg - J
  double normalize_input = 1e-4;      // max residual normalize_isometry accepts
  double normalize_target = 1e-12;
  double classify = 1e-8;             // isometry-class separation
  double boundary_null = 1e-10;       // |<z,z>| / |z|^2 for boundary points
  double boundary_null_input = 1e-6;  // accepted before renormalization
  double projective_eq = 1e-9;
  double fixed_point = 1e-10;
  double busemann_oracle = 1e-6;
  double geodesic_unit_speed = 1e-9;
  double gromov_conformality = 1e-9;
  double gromov_p_independence = 1e-10;
  double action_assoc = 1e-11;
  double homomorphism = 1e-11;
  double conjugation = 1e-10;
  double heis_exact = 1e-13;
  double chain_membership = 1e-8;
  double phi_roundtrip = 1e-10;
};

inline const Tolerances& tol() {
  static const Tolerances t{};
  return t;
}

// ---------------------------------------------------------------------------
// Portable deterministic RNG (splitmix64 core). std::uniform_* distributions
// are not bit-stable across standard libraries, so everything derives from
// raw 64-bit draws.
// ---------------------------------------------------------------------------
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0,1)
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // standard normal, Box-Muller (always consumes two draws)
  double gauss() {
    double u1 = uniform(), u2 = uniform();
    if (u1 <= 0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  cplx gauss_c() {
    double a = gauss(), b = gauss();
    return cplx(a, b);
  }

  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  // child stream for a named sub-task; keeps parent stream untouched
  Rng fork(std::uint64_t salt) const {
    return Rng(state_ ^ (0x632be59bd9b4e019ull * (salt + 0x9e3779b97f4a7c15ull)));
  }

 private:
  std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// Deterministic parallelism: fixed-size blocks, per-block slots, sequential
// merge. Results are bit-identical for any thread count.
// ---------------------------------------------------------------------------
inline constexpr std::size_t kParallelBlock = 2048;

// fn(block_index, begin, end) must only write state owned by block_index.
template <class Fn>
void parallel_blocks(std::size_t total, int threads, Fn&& fn) {
  const std::size_t nblocks = (total + kParallelBlock - 1) / kParallelBlock;
  if (threads <= 1 || nblocks <= 1) {
    for (std::size_t b = 0; b < nblocks; ++b)
      fn(b, b * kParallelBlock, std::min(total, (b + 1) * kParallelBlock));
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t b = next.fetch_add(1);
      if (b >= nblocks) return;
      fn(b, b * kParallelBlock, std::min(total, (b + 1) * kParallelBlock));
    }
  };
  std::vector<std::thread> pool;
  int nt = std::min<int>(threads, int(nblocks));
  pool.reserve(nt);
  for (int i = 0; i < nt; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

// Deterministic sum of per-element doubles: per-block partials, merged in
// block order.
template <class Fn>
double parallel_sum(std::size_t total, int threads, Fn&& value_of) {
  const std::size_t nblocks = (total + kParallelBlock - 1) / kParallelBlock;
  std::vector<double> partial(nblocks, 0.0);
  parallel_blocks(total, threads, [&](std::size_t b, std::size_t lo, std::size_t hi) {
    double s = 0;
    for (std::size_t i = lo; i < hi; ++i) s += value_of(i);
    partial[b] = s;
  });
  double s = 0;
  for (double p : partial) s += p;
  return s;
}

// FNV-1a over bytes; used for cell hashing and config hashes.
inline std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h = 0xcbf29ce484222325ull) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t fnv1a(const std::string& s) { return fnv1a(s.data(), s.size()); }

// Exact round-trip text form for doubles (C99 hex floats).
std::string hex_double(double x);
double parse_hex_double(const std::string& s);

}  // namespace chdim

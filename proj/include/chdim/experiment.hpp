#pragma once

// Experiment configuration (strict key-checked JSON), the dimension-run
// pipeline, and the versioned CSV / summary output formats.

#include <chdim/dimension.hpp>

#include <filesystem>
#include <optional>

namespace chdim {

struct ExperimentConfig {
  int n = 2;
  int generators = 2;
  std::uint64_t seed = 7;
  int word_length = 12;   // orbital-distance truncation
  int limit_length = 10;  // limit-point word length
  std::string limit_mode = "word-fixed-points";
  double scale_base = 0.5;
  int scale_count = 24;
  std::vector<std::string> metrics{"spherical", "heisenberg", "euclidean"};
  int resolution = 2048;     // ping-pong sampling
  int chain_resolution = 8;  // no-triple-chain grid
  double margin = 0.02;      // chain clearance margin
  double chain_margin = 0.1; // axis separation during construction
  double t0 = 1.0;
  double conjugator_scale = 0.5;
  double radius_factor = 0.35;
  unsigned power_cap = 64;
  std::string output_dir = "out";
  int threads = 1;
  double ps_exponent = 0.0;  // 0: use the series estimate
  bool force_shared_chain = false;

  void validate() const;
  std::string canonical_json() const;  // key-sorted dump used for hashing
  std::string hash() const;            // fnv64 of canonical_json, hex

  BuildParams build_params() const;
  BoxCountConfig box_params() const;
};

// Strict parse: unknown keys are input errors. Missing keys keep defaults.
ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig config_from_file(const std::string& path);

// --- results -------------------------------------------------------------------

struct DimensionRunResult {
  ExponentEstimate exponent;
  std::map<std::string, DimEstimate> by_metric;
  std::optional<FiberTransverse> fibers;
  std::optional<BaloghReport> balogh;
  double ps_exponent_used = 0;
  std::size_t limit_point_count = 0;
  std::size_t skipped_words = 0;
  // gates
  double theorem_c_alpha_gap = 0;  // |alpha - delta|
  double theorem_c_beta_gap = 0;   // |beta - delta|
  double delta_agreement = 0;      // |delta_counting - delta_series|
  bool theorem_a_ok = false;       // alpha >= delta - fiber/2 - 0.2
  std::vector<std::string> stage_errors;  // estimation failures, stage-tagged
};

DimensionRunResult run_dimension_experiment(const SchottkyDescriptor& D,
                                            const ExperimentConfig& cfg,
                                            const IwasawaFrame& F);

// --- output files ----------------------------------------------------------------

// "# chdim <version> config=<hash> seed=<seed>\nscale,count\n..."
void write_boxcount_csv(const std::filesystem::path& path, const DimEstimate& est,
                        const ExperimentConfig& cfg);

// chdim-summary/1 JSON document
void write_summary(const std::filesystem::path& path, const DimensionRunResult& r,
                   const ExperimentConfig& cfg, const SchottkyDescriptor& D);

std::string exponent_to_json(const ExponentEstimate& e);

}  // namespace chdim

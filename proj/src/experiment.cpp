#include <chdim/experiment.hpp>

#include <json.hpp>

#include <cinttypes>
#include <fstream>

namespace chdim {

using nlohmann::json;

void ExperimentConfig::validate() const {
  if (n < 2 || n > 7) throw input_error("config: n must be in [2,7]");
  if (generators < 2 || generators > 8) throw input_error("config: generators in [2,8]");
  if (word_length < 4 || word_length > 24) throw input_error("config: word_length in [4,24]");
  if (limit_length < 1 || limit_length > 20) throw input_error("config: limit_length in [1,20]");
  if (!(scale_base > 0 && scale_base <= 2)) throw input_error("config: scale_base in (0,2]");
  if (scale_count < 6 || scale_count > 40) throw input_error("config: scale_count in [6,40]");
  if (resolution < 64 || resolution > 1 << 20) throw input_error("config: resolution in [64,2^20]");
  if (chain_resolution < 2 || chain_resolution > 256)
    throw input_error("config: chain_resolution in [2,256]");
  if (!(margin >= 0 && margin < 1)) throw input_error("config: margin in [0,1)");
  if (!(chain_margin > 0 && chain_margin < 2)) throw input_error("config: chain_margin in (0,2)");
  if (!(t0 > 0 && t0 <= 8)) throw input_error("config: t0 in (0,8]");
  if (!(conjugator_scale > 0 && conjugator_scale <= 2))
    throw input_error("config: conjugator_scale in (0,2]");
  if (!(radius_factor > 0 && radius_factor < 0.5))
    throw input_error("config: radius_factor in (0,0.5)");
  if (power_cap < 1 || power_cap > 4096) throw input_error("config: power_cap in [1,4096]");
  if (threads < 1 || threads > 256) throw input_error("config: threads in [1,256]");
  limit_mode_from_string(limit_mode);
  for (const auto& m : metrics) metric_from_string(m);
}

std::string ExperimentConfig::canonical_json() const {
  json j;
  j["n"] = n;
  j["generators"] = generators;
  j["seed"] = seed;
  j["word_length"] = word_length;
  j["limit_length"] = limit_length;
  j["limit_mode"] = limit_mode;
  j["scale_base"] = hex_double(scale_base);
  j["scale_count"] = scale_count;
  j["metrics"] = metrics;
  j["resolution"] = resolution;
  j["chain_resolution"] = chain_resolution;
  j["margin"] = hex_double(margin);
  j["chain_margin"] = hex_double(chain_margin);
  j["t0"] = hex_double(t0);
  j["conjugator_scale"] = hex_double(conjugator_scale);
  j["radius_factor"] = hex_double(radius_factor);
  j["power_cap"] = power_cap;
  j["output_dir"] = output_dir;
  j["threads"] = threads;
  j["ps_exponent"] = hex_double(ps_exponent);
  j["force_shared_chain"] = force_shared_chain;
  return j.dump();  // nlohmann objects are key-sorted
}

std::string ExperimentConfig::hash() const {
  // the hash identifies the experiment, not the execution environment:
  // threads and output_dir do not change any numbers
  json j = json::parse(canonical_json());
  j.erase("threads");
  j.erase("output_dir");
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a(j.dump()));
  return std::string(buf);
}

BuildParams ExperimentConfig::build_params() const {
  BuildParams p;
  p.t0 = t0;
  p.conjugator_scale = conjugator_scale;
  p.chain_margin = chain_margin;
  p.radius_factor = radius_factor;
  p.power_cap = power_cap;
  p.resolution = resolution;
  p.chain_resolution = chain_resolution;
  p.margin = margin;
  p.force_shared_chain = force_shared_chain;
  return p;
}

BoxCountConfig ExperimentConfig::box_params() const {
  BoxCountConfig b;
  b.base_scale = scale_base;
  b.levels = scale_count;
  b.threads = threads;
  return b;
}

ExperimentConfig config_from_json_text(const std::string& text) {
  json j = json::parse(text);
  if (!j.is_object()) throw input_error("config: top level must be an object");
  ExperimentConfig c;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const json& v = it.value();
    if (key == "n") c.n = v.get<int>();
    else if (key == "generators") c.generators = v.get<int>();
    else if (key == "seed") c.seed = v.get<std::uint64_t>();
    else if (key == "word_length") c.word_length = v.get<int>();
    else if (key == "limit_length") c.limit_length = v.get<int>();
    else if (key == "limit_mode") c.limit_mode = v.get<std::string>();
    else if (key == "scale_base") c.scale_base = v.get<double>();
    else if (key == "scale_count") c.scale_count = v.get<int>();
    else if (key == "metrics") c.metrics = v.get<std::vector<std::string>>();
    else if (key == "resolution") c.resolution = v.get<int>();
    else if (key == "chain_resolution") c.chain_resolution = v.get<int>();
    else if (key == "margin") c.margin = v.get<double>();
    else if (key == "chain_margin") c.chain_margin = v.get<double>();
    else if (key == "t0") c.t0 = v.get<double>();
    else if (key == "conjugator_scale") c.conjugator_scale = v.get<double>();
    else if (key == "radius_factor") c.radius_factor = v.get<double>();
    else if (key == "power_cap") c.power_cap = v.get<unsigned>();
    else if (key == "output_dir") c.output_dir = v.get<std::string>();
    else if (key == "threads") c.threads = v.get<int>();
    else if (key == "ps_exponent") c.ps_exponent = v.get<double>();
    else if (key == "force_shared_chain") c.force_shared_chain = v.get<bool>();
    else throw input_error("config: unknown key '" + key + "'");
  }
  c.validate();
  return c;
}

ExperimentConfig config_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("config: cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return config_from_json_text(text);
}

// --- pipeline --------------------------------------------------------------------

DimensionRunResult run_dimension_experiment(const SchottkyDescriptor& D,
                                            const ExperimentConfig& cfg,
                                            const IwasawaFrame& F) {
  if (!D.verification.all())
    throw input_error("dimension run requires a fully verified descriptor");
  DimensionRunResult R;

  // exponent from orbital distances
  std::vector<double> distances = orbit_distances(D, cfg.word_length, F.origin, F.space);
  R.exponent = critical_exponent(distances, cfg.word_length, D.k);
  R.delta_agreement = std::abs(R.exponent.delta_counting - R.exponent.delta_series);
  const double delta = R.exponent.delta_series;
  // growth exponents live in (0, 2n-1]; estimates get a 0.3 slack
  const double delta_cap = 2.0 * D.n - 1.0 + 0.3;
  for (double est : {R.exponent.delta_counting, R.exponent.delta_series})
    if (!(est >= 0.0 && est <= delta_cap))
      throw estimation_error("critical exponent estimate " + std::to_string(est) +
                             " outside [0, " + std::to_string(delta_cap) + "]");

  // limit cloud & box counts
  PointCloud cloud =
      limit_points(D, cfg.limit_length, limit_mode_from_string(cfg.limit_mode), F);
  R.limit_point_count = cloud.points.size();
  R.skipped_words = cloud.skipped;
  for (const std::string& mname : cfg.metrics) {
    try {
      R.by_metric[mname] = box_count(cloud, metric_from_string(mname), cfg.box_params());
    } catch (const std::exception& e) {
      R.stage_errors.push_back("box_count[" + mname + "]: " + e.what());
    }
  }

  // Patterson-Sullivan cloud, fiber/transverse estimates
  R.ps_exponent_used = cfg.ps_exponent != 0 ? cfg.ps_exponent : delta;
  try {
    if (std::abs(R.ps_exponent_used - delta) > 0.5)
      throw input_error("ps exponent must lie within 0.5 of the estimate");
    WeightedCloud ps = ps_sample(D, cfg.limit_length, R.ps_exponent_used, F);
    FiberConfig fc;
    fc.threads = cfg.threads;
    R.fibers = fiber_transverse_dims(ps, fc);
    // additivity is a soft gate at 0.3 (reported) and a hard one at 0.5
    if (R.fibers->ly_residual > 0.5)
      R.stage_errors.push_back("fiber_transverse: additivity residual " +
                               std::to_string(R.fibers->ly_residual) +
                               " above the hard gate 0.5");
  } catch (const std::exception& e) {
    R.stage_errors.push_back(std::string("fiber_transverse: ") + e.what());
  }

  // gates
  double alpha = std::numeric_limits<double>::quiet_NaN();
  double beta = std::numeric_limits<double>::quiet_NaN();
  if (auto it = R.by_metric.find("spherical"); it != R.by_metric.end())
    alpha = it->second.slope;
  if (auto it = R.by_metric.find("heisenberg"); it != R.by_metric.end())
    beta = it->second.slope;
  if (std::isfinite(alpha)) R.theorem_c_alpha_gap = std::abs(alpha - delta);
  if (std::isfinite(beta)) R.theorem_c_beta_gap = std::abs(beta - delta);
  if (std::isfinite(alpha) && R.fibers)
    R.theorem_a_ok = alpha >= delta - 0.5 * R.fibers->fiber.median - 0.2;
  if (std::isfinite(alpha) && std::isfinite(beta))
    R.balogh = balogh_check(alpha, beta, D.n, 0.1);
  return R;
}

// --- writers ---------------------------------------------------------------------

namespace {
std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf);
}
}  // namespace

void write_boxcount_csv(const std::filesystem::path& path, const DimEstimate& est,
                        const ExperimentConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw input_error("cannot write " + path.string());
  out << "# chdim " << kLibraryVersion << " config=" << cfg.hash() << " seed=" << cfg.seed
      << " metric=" << to_string(est.metric) << "\n";
  out << "scale,count\n";
  for (const auto& [eps, c] : est.scales) out << format_double(eps) << "," << c << "\n";
}

namespace {

json dim_estimate_json(const DimEstimate& e) {
  json j;
  j["metric"] = to_string(e.metric);
  j["slope"] = format_double(e.slope);
  j["stderr"] = format_double(e.stderr_);
  j["window"] = {e.window_lo, e.window_hi};
  json sc = json::array();
  for (const auto& [eps, c] : e.scales) sc.push_back({format_double(eps), c});
  j["scales"] = std::move(sc);
  json ws = json::array();
  for (const auto& w : e.windows)
    ws.push_back({{"lo", w.lo},
                  {"hi", w.hi},
                  {"slope", format_double(w.slope)},
                  {"rms", format_double(w.rms)}});
  j["windows"] = std::move(ws);
  return j;
}

json pointwise_json(const PointwiseEstimate& p) {
  return json{{"median", format_double(p.median)},
              {"iqr", format_double(p.iqr)},
              {"centers_used", p.centers_used},
              {"centers_skipped", p.centers_skipped}};
}

}  // namespace

std::string exponent_to_json(const ExponentEstimate& e) {
  json j;
  j["delta_counting"] = format_double(e.delta_counting);
  j["delta_series"] = format_double(e.delta_series);
  j["window"] = {format_double(e.r_lo), format_double(e.r_hi)};
  j["word_length"] = e.word_length;
  return j.dump(2) + "\n";
}

void write_summary(const std::filesystem::path& path, const DimensionRunResult& r,
                   const ExperimentConfig& cfg, const SchottkyDescriptor& D) {
  json j;
  j["format"] = "chdim-summary/1";
  j["library_version"] = kLibraryVersion;
  j["config_hash"] = cfg.hash();
  j["seed"] = cfg.seed;
  j["descriptor"] = {{"n", D.n}, {"k", D.k}, {"seed", D.seed}, {"power", D.power}};
  j["exponent"] = json::parse(exponent_to_json(r.exponent));
  j["delta_agreement"] = format_double(r.delta_agreement);
  j["limit_points"] = r.limit_point_count;
  j["skipped_words"] = r.skipped_words;
  json metrics;
  for (const auto& [name, est] : r.by_metric) metrics[name] = dim_estimate_json(est);
  j["box_counts"] = std::move(metrics);
  if (r.fibers) {
    json f;
    f["fiber"] = pointwise_json(r.fibers->fiber);
    f["transverse"] = pointwise_json(r.fibers->transverse);
    f["dim_full"] = format_double(r.fibers->dim_full);
    f["ly_residual"] = format_double(r.fibers->ly_residual);
    f["slab_width"] = format_double(r.fibers->slab_width);
    f["slabs_used"] = r.fibers->slabs_used;
    j["fiber_transverse"] = std::move(f);
  }
  j["ps_exponent_used"] = format_double(r.ps_exponent_used);
  json gates;
  gates["theorem_c_alpha_gap"] = format_double(r.theorem_c_alpha_gap);
  gates["theorem_c_beta_gap"] = format_double(r.theorem_c_beta_gap);
  gates["delta_agreement"] = format_double(r.delta_agreement);
  gates["theorem_a_ok"] = r.theorem_a_ok;
  if (r.balogh) {
    gates["balogh"] = {{"pass", r.balogh->pass},
                       {"lower_alpha", format_double(r.balogh->lower_alpha)},
                       {"lower_codim", format_double(r.balogh->lower_codim)},
                       {"upper_double", format_double(r.balogh->upper_double)},
                       {"upper_plus_one", format_double(r.balogh->upper_plus_one)}};
  }
  j["gates"] = std::move(gates);
  if (!r.stage_errors.empty()) j["stage_errors"] = r.stage_errors;
  std::ofstream out(path);
  if (!out) throw input_error("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

}  // namespace chdim

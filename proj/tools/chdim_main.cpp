// chdim: experiment runner for complex hyperbolic Schottky systems and
// boundary dimension estimation.
//
// Exit codes: 0 success, 2 usage/config error, 3 construction failure,
// 4 verification failure, 5 estimation failure.

#include <chdim/experiment.hpp>
#include <chdim/sanity.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitConstruction = 3;
constexpr int kExitVerification = 4;
constexpr int kExitEstimation = 5;

using namespace chdim;

ExperimentConfig load_config(const std::string& config_path) {
  if (config_path.empty()) return ExperimentConfig{};
  return config_from_file(config_path);
}

SchottkyDescriptor load_descriptor(const std::string& path, const HermitianSpace& S) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open descriptor " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return descriptor_from_text(text, S);
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  if (!out) throw input_error("cannot write " + p.string());
  out << text;
}

std::string verification_report(const SchottkyDescriptor& d) {
  std::ostringstream os;
  os << "schottky verification (n=" << d.n << ", k=" << d.k << ", seed=" << d.seed
     << ", power=" << d.power << ")\n";
  os << "  chdim " << d.library_version
     << (d.config_hash.empty() ? "" : "  config=" + d.config_hash) << "\n";
  const auto& v = d.verification;
  os << "  condition 1 (no mutual inverses):    " << (v.cond1 ? "pass" : "FAIL") << "\n";
  os << "  condition 2 (disjoint closures):     " << (v.cond2 ? "pass" : "FAIL")
     << "  margin " << v.domain_margin << "\n";
  os << "  condition 3 (ping-pong inclusion):   " << (v.cond3 ? "pass" : "FAIL")
     << "  margin " << v.pingpong_margin << "  resolution " << v.resolution << "\n";
  os << "  condition 4 (no triple chain):       " << (v.cond4 ? "pass" : "FAIL")
     << "  clearance " << v.chain_clearance << " (required > " << v.chain_margin
     << ")  resolution " << v.chain_resolution << "\n";
  if (!v.witness.empty()) os << "  witness: " << v.witness << "\n";
  os << "  verdict: " << (v.all() ? "verified (sampling semidecision)" : "NOT VERIFIED")
     << "\n";
  return os.str();
}

int cmd_schottky_build(const ExperimentConfig& cfg, const std::string& out_path) {
  HermitianSpace S = HermitianSpace::ball(cfg.n);
  std::filesystem::create_directories(cfg.output_dir);
  std::filesystem::path out =
      out_path.empty() ? std::filesystem::path(cfg.output_dir) / "descriptor.json"
                       : std::filesystem::path(out_path);
  SchottkyDescriptor d;
  try {
    d = build_good_position(S, cfg.generators, cfg.seed, cfg.build_params());
  } catch (const construction_error& e) {
    std::cerr << "construction failure: " << e.what() << "\n";
    return kExitConstruction;
  }
  d.config_hash = cfg.hash();
  write_text(out, descriptor_to_text(d));
  std::filesystem::path report = out;
  report.replace_extension(".report.txt");
  write_text(report, verification_report(d));
  std::cout << verification_report(d);
  std::cout << "descriptor: " << out.string() << "\n";
  return d.verification.all() ? kExitOk : kExitVerification;
}

int cmd_schottky_verify(const ExperimentConfig& cfg, const std::string& descriptor_path) {
  HermitianSpace S = HermitianSpace::ball(cfg.n);
  SchottkyDescriptor d = load_descriptor(descriptor_path, S);
  PingPongReport pp = verify_ping_pong(d, cfg.resolution, S);
  d.verification.cond1 = pp.cond1;
  d.verification.cond2 = pp.cond2;
  d.verification.cond3 = pp.cond3;
  d.verification.resolution = cfg.resolution;
  d.verification.domain_margin = pp.domain_margin;
  d.verification.pingpong_margin = pp.margin;
  d.verification.witness = pp.witness;
  if (pp.pass()) {
    TripleChainReport tc = verify_no_triple_chain(d, cfg.chain_resolution, cfg.margin, S);
    d.verification.cond4 = tc.pass;
    d.verification.chain_resolution = cfg.chain_resolution;
    d.verification.chain_clearance = tc.clearance;
    d.verification.chain_margin = cfg.margin;
    if (!tc.pass) d.verification.witness = tc.witness;
  } else {
    d.verification.cond4 = false;
  }
  std::cout << verification_report(d);
  return d.verification.all() ? kExitOk : kExitVerification;
}

int cmd_limit_sample(const ExperimentConfig& cfg, const std::string& descriptor_path,
                     const std::string& out_path) {
  HermitianSpace S = HermitianSpace::ball(cfg.n);
  SchottkyDescriptor d = load_descriptor(descriptor_path, S);
  IwasawaFrame F = IwasawaFrame::standard(S);
  PointCloud cloud = limit_points(d, cfg.limit_length, limit_mode_from_string(cfg.limit_mode), F);
  std::filesystem::create_directories(cfg.output_dir);
  std::filesystem::path out =
      out_path.empty() ? std::filesystem::path(cfg.output_dir) / "limit_points.csv"
                       : std::filesystem::path(out_path);
  std::ofstream o(out);
  if (!o) throw input_error("cannot write " + out.string());
  o << "# chdim " << kLibraryVersion << " config=" << cfg.hash() << " seed=" << cfg.seed
    << " mode=" << to_string(cloud.mode) << " length=" << cloud.word_length << "\n";
  for (int i = 0; i + 1 < cfg.n; ++i) o << "re_v" << i << ",im_v" << i << ",";
  o << "t,sph\n";
  char buf[64];
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const HeisPoint& h = cloud.heis[i];
    for (Eigen::Index j = 0; j < h.v.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,", h.v(j).real(), h.v(j).imag());
      o << buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g,", h.t);
    o << buf;
    const VecC& w = cloud.sph[i];
    for (Eigen::Index j = 0; j < w.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g %.17g%s", w(j).real(), w(j).imag(),
                    j + 1 < w.size() ? " " : "");
      o << buf;
    }
    o << "\n";
  }
  std::cout << "wrote " << cloud.points.size() << " points (" << cloud.skipped
            << " words skipped) to " << out.string() << "\n";
  return kExitOk;
}

int cmd_exponent(const ExperimentConfig& cfg, const std::string& descriptor_path) {
  HermitianSpace S = HermitianSpace::ball(cfg.n);
  SchottkyDescriptor d = load_descriptor(descriptor_path, S);
  IwasawaFrame F = IwasawaFrame::standard(S);
  std::vector<double> dists = orbit_distances(d, cfg.word_length, F.origin, S);
  ExponentEstimate est = critical_exponent(dists, cfg.word_length, d.k);
  std::cout << exponent_to_json(est);
  return kExitOk;
}

int cmd_dimension_run(const ExperimentConfig& cfg, const std::string& descriptor_path) {
  HermitianSpace S = HermitianSpace::ball(cfg.n);
  SchottkyDescriptor d = load_descriptor(descriptor_path, S);
  if (!d.verification.all()) {
    std::cerr << "descriptor is not fully verified; refusing the dimension run\n";
    return kExitVerification;
  }
  IwasawaFrame F = IwasawaFrame::standard(S);
  std::filesystem::create_directories(cfg.output_dir);
  DimensionRunResult r = run_dimension_experiment(d, cfg, F);
  for (const auto& [name, est] : r.by_metric)
    write_boxcount_csv(std::filesystem::path(cfg.output_dir) / ("boxcount_" + name + ".csv"),
                       est, cfg);
  write_summary(std::filesystem::path(cfg.output_dir) / "summary.json", r, cfg, d);
  std::cout << "delta_counting " << r.exponent.delta_counting << "  delta_series "
            << r.exponent.delta_series << "  (agreement " << r.delta_agreement << ")\n";
  for (const auto& [name, est] : r.by_metric)
    std::cout << name << " slope " << est.slope << " +- " << est.stderr_ << "\n";
  if (r.fibers)
    std::cout << "fiber " << r.fibers->fiber.median << "  transverse "
              << r.fibers->transverse.median << "  LY residual " << r.fibers->ly_residual
              << "\n";
  std::cout << "|alpha-delta| " << r.theorem_c_alpha_gap << "  |beta-delta| "
            << r.theorem_c_beta_gap << "  theorem-A gate "
            << (r.theorem_a_ok ? "pass" : "FAIL") << "\n";
  if (r.balogh) std::cout << "balogh band " << (r.balogh->pass ? "pass" : "FAIL") << "\n";
  for (const auto& e : r.stage_errors) std::cerr << "stage error: " << e << "\n";
  return r.stage_errors.empty() ? kExitOk : kExitEstimation;
}

int cmd_sanity(const ExperimentConfig& cfg) {
  auto checks = run_sanity_battery(cfg.seed);
  bool all = true;
  for (const auto& c : checks) {
    std::cout << (c.pass ? "pass" : "FAIL") << " " << c.id << " residual=" << c.residual
              << " threshold=" << c.threshold << "\n";
    all = all && c.pass;
  }
  return all ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"complex hyperbolic Schottky systems and boundary dimension experiments"};
  app.require_subcommand(1);

  std::string config_path, descriptor_path, out_path;
  // flag overrides, applied after the config file
  std::optional<std::uint64_t> seed;
  std::optional<int> nopt, kopt, word_length, limit_length, threads, resolution;
  std::optional<double> margin;
  std::optional<std::string> limit_mode, output_dir;
  bool force_shared_chain = false;

  auto add_common = [&](CLI::App* sub, bool needs_descriptor) {
    sub->add_option("--config", config_path, "experiment config (JSON)");
    if (needs_descriptor)
      sub->add_option("descriptor", descriptor_path, "descriptor file")->required();
    sub->add_option("--seed", seed, "seed override");
    sub->add_option("--n", nopt, "complex dimension override");
    sub->add_option("--k", kopt, "generator count override");
    sub->add_option("--word-length", word_length, "orbital word length override");
    sub->add_option("--limit-length", limit_length, "limit-point word length override");
    sub->add_option("--limit-mode", limit_mode, "limit mode override");
    sub->add_option("--threads", threads, "parallelism degree");
    sub->add_option("--resolution", resolution, "verification resolution");
    sub->add_option("--margin", margin, "chain clearance margin");
    sub->add_option("--output-dir", output_dir, "output directory");
  };

  CLI::App* build = app.add_subcommand("schottky-build", "construct a well-positioned system");
  add_common(build, false);
  build->add_option("--out", out_path, "descriptor output path");
  build->add_flag("--force-shared-chain", force_shared_chain,
                  "negative control: all generator axes on one chain");

  CLI::App* verify = app.add_subcommand("schottky-verify", "re-verify a descriptor");
  add_common(verify, true);

  CLI::App* sample = app.add_subcommand("limit-sample", "sample the limit set");
  add_common(sample, true);
  sample->add_option("--out", out_path, "point-cloud output path");

  CLI::App* expo = app.add_subcommand("exponent", "critical exponent estimators");
  add_common(expo, true);

  CLI::App* dimrun = app.add_subcommand("dimension-run", "full dimension experiment");
  add_common(dimrun, true);

  CLI::App* sanity = app.add_subcommand("sanity", "metric/group invariant battery");
  add_common(sanity, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    ExperimentConfig cfg = load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (nopt) cfg.n = *nopt;
    if (kopt) cfg.generators = *kopt;
    if (word_length) cfg.word_length = *word_length;
    if (limit_length) cfg.limit_length = *limit_length;
    if (limit_mode) cfg.limit_mode = *limit_mode;
    if (threads) cfg.threads = *threads;
    if (resolution) cfg.resolution = *resolution;
    if (margin) cfg.margin = *margin;
    if (output_dir) cfg.output_dir = *output_dir;
    if (force_shared_chain) cfg.force_shared_chain = true;
    cfg.validate();

    if (build->parsed()) return cmd_schottky_build(cfg, out_path);
    if (verify->parsed()) return cmd_schottky_verify(cfg, descriptor_path);
    if (sample->parsed()) return cmd_limit_sample(cfg, descriptor_path, out_path);
    if (expo->parsed()) return cmd_exponent(cfg, descriptor_path);
    if (dimrun->parsed()) return cmd_dimension_run(cfg, descriptor_path);
    if (sanity->parsed()) return cmd_sanity(cfg);
    return kExitUsage;
  } catch (const input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const construction_error& e) {
    std::cerr << "construction failure: " << e.what() << "\n";
    return kExitConstruction;
  } catch (const estimation_error& e) {
    std::cerr << "estimation failure: " << e.what() << "\n";
    return kExitEstimation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEstimation;
  }
}

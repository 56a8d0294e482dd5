#include <chdim/schottky.hpp>

#include <json.hpp>

namespace chdim {

namespace {

using nlohmann::json;

json complex_to_json(const cplx& z) {
  return json::array({hex_double(z.real()), hex_double(z.imag())});
}

cplx complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw input_error("descriptor: bad complex entry");
  return cplx(parse_hex_double(j[0].get<std::string>()),
              parse_hex_double(j[1].get<std::string>()));
}

json matrix_to_json(const MatC& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

MatC matrix_from_json(const json& j, int d) {
  if (!j.is_array() || int(j.size()) != d) throw input_error("descriptor: bad matrix");
  MatC m(d, d);
  for (int i = 0; i < d; ++i) {
    if (int(j[i].size()) != d) throw input_error("descriptor: bad matrix row");
    for (int c = 0; c < d; ++c) m(i, c) = complex_from_json(j[i][c]);
  }
  return m;
}

json vector_to_json(const VecC& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

VecC vector_from_json(const json& j) {
  VecC v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(Eigen::Index(i)) = complex_from_json(j[i]);
  return v;
}

}  // namespace

std::string descriptor_to_text(const SchottkyDescriptor& d) {
  json j;
  j["format"] = "chdim-schottky/1";
  j["library_version"] = d.library_version;
  j["config_hash"] = d.config_hash;
  j["n"] = d.n;
  j["k"] = d.k;
  j["seed"] = d.seed;
  j["power"] = d.power;
  j["t0"] = hex_double(d.t0);
  json gens = json::array();
  for (const auto& g : d.gens) gens.push_back(matrix_to_json(g.m));
  j["generators"] = std::move(gens);
  json doms = json::array();
  for (std::size_t i = 0; i < d.domains.size(); ++i) {
    json dom;
    dom["letter"] = int(id_letter(int(i)));
    dom["center"] = vector_to_json(d.domains[i].center.z);
    dom["radius"] = hex_double(d.domains[i].radius);
    doms.push_back(std::move(dom));
  }
  j["domains"] = std::move(doms);
  json ver;
  ver["cond1"] = d.verification.cond1;
  ver["cond2"] = d.verification.cond2;
  ver["cond3"] = d.verification.cond3;
  ver["cond4"] = d.verification.cond4;
  ver["resolution"] = d.verification.resolution;
  ver["chain_resolution"] = d.verification.chain_resolution;
  ver["domain_margin"] = hex_double(d.verification.domain_margin);
  ver["pingpong_margin"] = hex_double(d.verification.pingpong_margin);
  ver["chain_clearance"] = hex_double(d.verification.chain_clearance);
  ver["chain_margin"] = hex_double(d.verification.chain_margin);
  ver["witness"] = d.verification.witness;
  j["verification"] = std::move(ver);
  return j.dump(2) + "\n";
}

SchottkyDescriptor descriptor_from_text(const std::string& text, const HermitianSpace& S) {
  json j = json::parse(text);
  if (j.at("format").get<std::string>() != "chdim-schottky/1")
    throw input_error("descriptor: unknown format tag");
  SchottkyDescriptor d;
  d.library_version = j.at("library_version").get<std::string>();
  d.config_hash = j.value("config_hash", std::string{});
  d.n = j.at("n").get<int>();
  if (d.n != S.n) throw input_error("descriptor: dimension does not match the space");
  d.k = j.at("k").get<int>();
  d.seed = j.at("seed").get<std::uint64_t>();
  d.power = j.at("power").get<unsigned>();
  d.t0 = parse_hex_double(j.at("t0").get<std::string>());
  for (const auto& g : j.at("generators"))
    d.gens.emplace_back(matrix_from_json(g, S.dim()));
  if (int(d.gens.size()) != d.k) throw input_error("descriptor: generator count mismatch");
  d.domains.resize(2 * d.k);
  for (const auto& dom : j.at("domains")) {
    int letter = dom.at("letter").get<int>();
    int id = letter_id(int8_t(letter));
    if (id < 0 || id >= 2 * d.k) throw input_error("descriptor: domain letter out of range");
    BoundaryPoint c;
    c.z = vector_from_json(dom.at("center"));
    d.domains[id].center = std::move(c);
    d.domains[id].radius = parse_hex_double(dom.at("radius").get<std::string>());
  }
  const auto& ver = j.at("verification");
  d.verification.cond1 = ver.at("cond1").get<bool>();
  d.verification.cond2 = ver.at("cond2").get<bool>();
  d.verification.cond3 = ver.at("cond3").get<bool>();
  d.verification.cond4 = ver.at("cond4").get<bool>();
  d.verification.resolution = ver.at("resolution").get<int>();
  d.verification.chain_resolution = ver.at("chain_resolution").get<int>();
  d.verification.domain_margin = parse_hex_double(ver.at("domain_margin").get<std::string>());
  d.verification.pingpong_margin =
      parse_hex_double(ver.at("pingpong_margin").get<std::string>());
  d.verification.chain_clearance =
      parse_hex_double(ver.at("chain_clearance").get<std::string>());
  d.verification.chain_margin = parse_hex_double(ver.at("chain_margin").get<std::string>());
  d.verification.witness = ver.at("witness").get<std::string>();
  return d;
}

}  // namespace chdim

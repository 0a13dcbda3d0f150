#include "swiptsec/config_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace swiptsec {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double linear_of(const json& v, const char* what) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_linear(v.get<std::string>());
  throw std::invalid_argument(std::string(what) + ": expected a number or a dB/dBm string");
}

std::vector<double> linear_list(const json& v, int count, const char* what) {
  std::vector<double> out;
  if (v.is_array()) {
    for (const auto& e : v) out.push_back(linear_of(e, what));
    if (static_cast<int>(out.size()) != count)
      throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(count) +
                                  " entries");
  } else {
    out.assign(count, linear_of(v, what));
  }
  return out;
}

json matrix_to_json(const MatC& m) {
  json entries = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      entries.push_back({m(r, c).real(), m(r, c).imag()});
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

MatC matrix_from_json(const json& j) {
  const int rows = j.at("rows").get<int>(), cols = j.at("cols").get<int>();
  const auto& entries = j.at("entries");
  if (static_cast<int>(entries.size()) != rows * cols)
    throw std::invalid_argument("matrix entry count does not match its shape");
  MatC m(rows, cols);
  int idx = 0;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c, ++idx)
      m(r, c) = Cplx(entries[idx][0].get<double>(), entries[idx][1].get<double>());
  return m;
}

std::string join_path(const std::string& base, const std::string& rel) {
  if (rel.empty() || rel.front() == '/' || base.empty()) return rel;
  return base + "/" + rel;
}

}  // namespace

double parse_linear(const std::string& text) {
  size_t pos = 0;
  double value;
  try {
    value = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a numeric value: '" + text + "'");
  }
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos == text.size()) return value;
  std::string unit = text.substr(pos);
  if (unit == "dB" || unit == "db" || unit == "dBm" || unit == "dbm" || unit == "DB")
    return std::pow(10.0, value / 10.0);
  throw std::invalid_argument("unknown unit suffix in '" + text + "'");
}

ScenarioConfig config_from_json_text(const std::string& text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }

  ScenarioConfig cfg;
  if (j.contains("n_tx")) cfg.n_tx = j["n_tx"].get<int>();
  if (j.contains("n_er")) cfg.n_er = j["n_er"].get<int>();
  if (j.contains("n_eve")) cfg.n_eve = j["n_eve"].get<int>();
  if (j.contains("eve_antennas")) {
    const auto& v = j["eve_antennas"];
    if (v.is_array())
      cfg.eve_antennas = v.get<std::vector<int>>();
    else
      cfg.eve_antennas.assign(cfg.n_eve, v.get<int>());
  } else {
    cfg.eve_antennas.assign(cfg.n_eve, 1);
  }
  if (j.contains("sigma_d_sq")) cfg.sigma_d_sq = linear_of(j["sigma_d_sq"], "sigma_d_sq");
  if (j.contains("sigma_e_sq")) cfg.sigma_e_sq = linear_of(j["sigma_e_sq"], "sigma_e_sq");
  if (j.contains("p_secrecy")) cfg.p_secrecy = j["p_secrecy"].get<double>();
  if (j.contains("q_eh")) cfg.q_eh = j["q_eh"].get<double>();
  if (j.contains("rate_target")) cfg.rate_target = j["rate_target"].get<double>();
  if (j.contains("eh_targets"))
    cfg.eh_targets = linear_list(j["eh_targets"], cfg.n_er, "eh_targets");
  else
    cfg.eh_targets.assign(cfg.n_er, 0.0);
  if (j.contains("eh_efficiency"))
    cfg.eh_efficiency = linear_list(j["eh_efficiency"], cfg.n_er, "eh_efficiency");
  else
    cfg.eh_efficiency.assign(cfg.n_er, 1.0);
  if (j.contains("power_budget")) cfg.power_budget = linear_of(j["power_budget"], "power_budget");
  if (j.contains("pathloss")) {
    const auto& pl = j["pathloss"];
    if (pl.contains("l_c")) cfg.pathloss.l_c = linear_of(pl["l_c"], "pathloss.l_c");
    if (pl.contains("exponent")) cfg.pathloss.exponent = pl["exponent"].get<double>();
    if (pl.contains("distance")) cfg.pathloss.distance = pl["distance"].get<double>();
  }
  if (j.contains("error_scale")) {
    const auto& es = j["error_scale"];
    if (es.contains("eps_sq")) cfg.error_scale.eps_sq = linear_of(es["eps_sq"], "eps_sq");
    if (es.contains("er_cov"))
      for (const auto& mj : es["er_cov"]) cfg.error_scale.er_cov.push_back(matrix_from_json(mj));
    if (es.contains("eve_cov"))
      for (const auto& mj : es["eve_cov"])
        cfg.error_scale.eve_cov.push_back(matrix_from_json(mj));
    if (es.contains("er_cov_files"))
      for (const auto& f : es["er_cov_files"])
        cfg.error_scale.er_cov.push_back(load_complex_matrix(
            join_path(base_dir, f.get<std::string>()), cfg.n_tx, cfg.n_tx));
    if (es.contains("eve_cov_files")) {
      const auto& files = es["eve_cov_files"];
      if (static_cast<int>(files.size()) != cfg.n_eve)
        throw std::invalid_argument("eve_cov_files: need one file per eavesdropper");
      for (int i = 0; i < cfg.n_eve; ++i) {
        const int side = cfg.n_tx * cfg.eve_antennas[i];
        cfg.error_scale.eve_cov.push_back(
            load_complex_matrix(join_path(base_dir, files[i].get<std::string>()), side, side));
      }
    }
  }
  if (j.contains("rng_seed")) {
    const auto& s = j["rng_seed"];
    cfg.rng_seed = s.is_string() ? std::stoull(s.get<std::string>()) : s.get<std::uint64_t>();
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::string dir;
  const size_t slash = path.find_last_of('/');
  if (slash != std::string::npos) dir = path.substr(0, slash);
  return config_from_json_text(read_file(path), dir);
}

std::string config_to_json_text(const ScenarioConfig& cfg) {
  json j;
  j["n_tx"] = cfg.n_tx;
  j["n_er"] = cfg.n_er;
  j["n_eve"] = cfg.n_eve;
  j["eve_antennas"] = cfg.eve_antennas;
  j["sigma_d_sq"] = cfg.sigma_d_sq;
  j["sigma_e_sq"] = cfg.sigma_e_sq;
  j["p_secrecy"] = cfg.p_secrecy;
  j["q_eh"] = cfg.q_eh;
  j["rate_target"] = cfg.rate_target;
  j["eh_targets"] = cfg.eh_targets;
  j["eh_efficiency"] = cfg.eh_efficiency;
  j["power_budget"] = cfg.power_budget;
  j["pathloss"] = {{"l_c", cfg.pathloss.l_c},
                   {"exponent", cfg.pathloss.exponent},
                   {"distance", cfg.pathloss.distance}};
  json es;
  es["eps_sq"] = cfg.error_scale.eps_sq;
  if (!cfg.error_scale.er_cov.empty()) {
    es["er_cov"] = json::array();
    for (const auto& m : cfg.error_scale.er_cov) es["er_cov"].push_back(matrix_to_json(m));
  }
  if (!cfg.error_scale.eve_cov.empty()) {
    es["eve_cov"] = json::array();
    for (const auto& m : cfg.error_scale.eve_cov) es["eve_cov"].push_back(matrix_to_json(m));
  }
  j["error_scale"] = std::move(es);
  j["rng_seed"] = cfg.rng_seed;
  return j.dump(2) + "\n";
}

void save_manifest(const RunManifest& m, const std::string& path) {
  json j;
  j["version"] = m.version;
  j["command"] = m.command;
  j["config"] = json::parse(config_to_json_text(m.config));
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write manifest: " + path);
  out << j.dump(2) << "\n";
}

RunManifest load_manifest(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("manifest is not valid JSON: ") + e.what());
  }
  RunManifest m;
  m.version = j.at("version").get<std::string>();
  m.command = j.at("command").get<std::vector<std::string>>();
  m.config = config_from_json_text(j.at("config").dump(), "");
  return m;
}

}  // namespace swiptsec

#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "aqec/device/params.hpp"

namespace aqec {

inline constexpr int kProfileSchemaVersion = 1;

// Measured nine-mode device. Kerr values are signed (negative), stored as
// chi/2pi in MHz. Thermal populations quoted as "< 0.1 %" are stored at 0.001.
inline DeviceParams default_profile() {
  DeviceParams p;
  p.name = "paper-default";
  using K = ModeKind;
  p.modes = {
      {"I1", K::qubit, 4941.3, 145.0, 170.0, 0.0038},
      {"R_I1", K::readout, 7552.1, 0.054, std::nullopt, 0.001},
      {"S1", K::cavity, 6145.3, 1380.0, 2034.0, 0.0049},
      {"Y1", K::qubit, 5285.3, 135.0, 130.0, 0.0046},
      {"R_Y1", K::readout, 7588.2, 0.052, std::nullopt, 0.001},
      {"S2", K::cavity, 5593.9, 1170.0, 680.0, 0.001},
      {"Y2", K::qubit, 4810.8, 110.0, 105.0, 0.0041},
      {"R_Y2", K::readout, 7592.5, 0.067, std::nullopt, 0.001},
      {"S3", K::cavity, 6028.5, 91.0, std::nullopt, 0.001},
  };
  p.kerr = {
      {"I1", "I1", -160.0},   {"I1", "R_I1", -2.8},   {"I1", "S1", -1.0250},
      {"S1", "S1", -0.0023},  {"S1", "Y1", -0.599},   {"S1", "S2", -0.0097},
      {"S1", "Y2", 0.0},      {"Y1", "Y1", -153.0},   {"Y1", "R_Y1", -2.5},
      {"Y1", "S2", -3.091},   {"Y1", "Y2", -0.0158},  {"S2", "S2", -0.0281},
      {"S2", "Y2", -0.525},   {"Y2", "Y2", -160.0},   {"Y2", "R_Y2", -2.1},
      {"Y2", "S3", -0.25},
  };
  for (std::size_t i = 0; i < p.modes.size(); ++i) {
    for (std::size_t j = i; j < p.modes.size(); ++j) {
      const auto& a = p.modes[i].name;
      const auto& b = p.modes[j].name;
      if (!p.kerr_mhz(a, b)) p.uncoupled.insert({a, b});
    }
  }
  return p;
}

inline nlohmann::json to_json(const DeviceParams& p) {
  nlohmann::json j;
  j["schema_version"] = kProfileSchemaVersion;
  j["name"] = p.name;
  j["modes"] = nlohmann::json::array();
  for (const auto& m : p.modes) {
    nlohmann::json e{{"name", m.name},
                     {"kind", to_string(m.kind)},
                     {"freq_mhz", m.freq_mhz},
                     {"n_th", m.n_th}};
    if (m.t1_us) e["t1_us"] = *m.t1_us;
    if (m.t2_us) e["t2_us"] = *m.t2_us;
    j["modes"].push_back(e);
  }
  j["kerr_mhz"] = nlohmann::json::array();
  for (const auto& k : p.kerr) j["kerr_mhz"].push_back({k.a, k.b, k.mhz});
  j["uncoupled"] = nlohmann::json::array();
  for (const auto& [a, b] : p.uncoupled) j["uncoupled"].push_back({a, b});
  return j;
}

namespace detail {

template <typename T>
T json_field(const nlohmann::json& j, const std::string& key,
             const std::string& where) {
  if (!j.contains(key)) {
    throw std::invalid_argument("missing key '" + where + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw std::invalid_argument("key '" + where + key + "' has the wrong type");
  }
}

}  // namespace detail

inline DeviceParams device_params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("profile must be a JSON object");
  const int version = detail::json_field<int>(j, "schema_version", "");
  if (version != kProfileSchemaVersion) {
    throw std::invalid_argument("key 'schema_version': unsupported value " +
                                std::to_string(version));
  }
  DeviceParams p;
  p.name = detail::json_field<std::string>(j, "name", "");
  const auto modes = detail::json_field<nlohmann::json>(j, "modes", "");
  if (!modes.is_array()) throw std::invalid_argument("key 'modes' must be an array");
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const std::string where = "modes[" + std::to_string(i) + "].";
    const auto& e = modes[i];
    ModeParams m;
    m.name = detail::json_field<std::string>(e, "name", where);
    m.kind = mode_kind_from_string(detail::json_field<std::string>(e, "kind", where));
    m.freq_mhz = detail::json_field<double>(e, "freq_mhz", where);
    m.n_th = detail::json_field<double>(e, "n_th", where);
    if (e.contains("t1_us")) m.t1_us = detail::json_field<double>(e, "t1_us", where);
    if (e.contains("t2_us")) m.t2_us = detail::json_field<double>(e, "t2_us", where);
    p.modes.push_back(m);
  }
  const auto kerr = detail::json_field<nlohmann::json>(j, "kerr_mhz", "");
  for (std::size_t i = 0; i < kerr.size(); ++i) {
    const auto& e = kerr[i];
    if (!e.is_array() || e.size() != 3 || !e[0].is_string() || !e[1].is_string() ||
        !e[2].is_number()) {
      throw std::invalid_argument("key 'kerr_mhz[" + std::to_string(i) +
                                  "]' must be [mode, mode, value]");
    }
    p.kerr.push_back({e[0].get<std::string>(), e[1].get<std::string>(), e[2].get<double>()});
  }
  if (j.contains("uncoupled")) {
    const auto& u = j.at("uncoupled");
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (!u[i].is_array() || u[i].size() != 2) {
        throw std::invalid_argument("key 'uncoupled[" + std::to_string(i) +
                                    "]' must be [mode, mode]");
      }
      p.uncoupled.insert({u[i][0].get<std::string>(), u[i][1].get<std::string>()});
    }
  }
  return p;
}

inline DeviceParams load_profile_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open profile '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("profile '" + path.string() + "' is not valid JSON: " +
                                e.what());
  }
  return device_params_from_json(j);
}

// Resolves a profile name or path. Names are looked up in $AQEC_PROFILE_DIR
// first; "paper-default" falls back to the built-in dataset.
inline DeviceParams resolve_profile(const std::string& name_or_path) {
  namespace fs = std::filesystem;
  if (name_or_path.find('/') != std::string::npos ||
      (name_or_path.size() > 5 &&
       name_or_path.substr(name_or_path.size() - 5) == ".json")) {
    return load_profile_file(name_or_path);
  }
  if (const char* dir = std::getenv("AQEC_PROFILE_DIR")) {
    const fs::path candidate = fs::path(dir) / (name_or_path + ".json");
    if (fs::exists(candidate)) return load_profile_file(candidate);
  }
  if (name_or_path == "paper-default") return default_profile();
  throw std::invalid_argument("unknown profile '" + name_or_path + "'");
}

}  // namespace aqec

#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace tdnrbc {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double out;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: key '" + key + "' has non-numeric value '" + v + "'");
  }
  if (pos != v.size())
    throw std::invalid_argument("config: trailing characters in value of '" + key + "'");
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  double d = to_double(key, v);
  int i = static_cast<int>(std::lround(d));
  if (d != i)
    throw std::invalid_argument("config: key '" + key + "' must be an integer");
  return i;
}

std::vector<double> to_list(const std::string& key, std::string v) {
  if (v.size() < 2 || v.front() != '[' || v.back() != ']')
    throw std::invalid_argument("config: key '" + key + "' expects [a,b,...]");
  v = v.substr(1, v.size() - 2);
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double(key, item));
  }
  return out;
}

}  // namespace

Scenario parse_config_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                  " is not key=value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (kv.count(key))
      throw std::invalid_argument("config: duplicate key '" + key + "'");
    kv[key] = val;
  }

  Scenario sc;  // section-4 defaults
  DrudeParams cloak;
  bool cloak_disabled = false;

  auto take = [&](const char* key) -> std::string {
    auto it = kv.find(key);
    if (it == kv.end()) return "";
    std::string v = it->second;
    kv.erase(it);
    return v;
  };

  if (std::string v = take("incident.type"); !v.empty()) {
    if (v == "monochromatic")
      sc.incident.type = IncidentWave::Type::Monochromatic;
    else if (v == "pulse")
      sc.incident.type = IncidentWave::Type::Pulse;
    else
      throw std::invalid_argument("config: incident.type must be monochromatic or pulse");
  }
  if (std::string v = take("incident.A"); !v.empty())
    sc.incident.amplitude = to_double("incident.A", v);
  if (std::string v = take("incident.k"); !v.empty())
    sc.incident.k = to_double("incident.k", v);
  if (std::string v = take("incident.omega"); !v.empty())
    sc.incident.omega = to_double("incident.omega", v);
  if (std::string v = take("incident.tc"); !v.empty())
    sc.incident.t_c = to_double("incident.tc", v);
  if (std::string v = take("incident.q"); !v.empty())
    sc.incident.q = to_double("incident.q", v);

  if (std::string v = take("cloak.omega_c"); !v.empty())
    cloak.omega_c = to_double("cloak.omega_c", v);
  if (std::string v = take("cloak.gamma1"); !v.empty())
    cloak.gamma1 = to_double("cloak.gamma1", v);
  if (std::string v = take("cloak.gamma2"); !v.empty())
    cloak.gamma2 = to_double("cloak.gamma2", v);
  if (std::string v = take("cloak.R1"); !v.empty())
    cloak.R1 = to_double("cloak.R1", v);
  if (std::string v = take("cloak.R2"); !v.empty())
    cloak.R2 = to_double("cloak.R2", v);
  if (cloak.R1 == cloak.R2) cloak_disabled = true;

  if (std::string v = take("disc.E"); !v.empty()) sc.E = to_int("disc.E", v);
  if (std::string v = take("disc.N"); !v.empty()) sc.N = to_int("disc.N", v);
  if (std::string v = take("disc.L"); !v.empty()) sc.L = to_int("disc.L", v);
  if (std::string v = take("disc.b"); !v.empty()) sc.b = to_double("disc.b", v);
  if (std::string v = take("disc.R3"); !v.empty())
    sc.R3 = to_double("disc.R3", v);
  if (std::string v = take("disc.dt"); !v.empty())
    sc.nm.dt = to_double("disc.dt", v);
  if (std::string v = take("disc.gamma"); !v.empty())
    sc.nm.gamma = to_double("disc.gamma", v);
  if (std::string v = take("disc.beta"); !v.empty())
    sc.nm.beta = to_double("disc.beta", v);
  if (std::string v = take("disc.t_end"); !v.empty())
    sc.t_end = to_double("disc.t_end", v);
  if (std::string v = take("diag.dt"); !v.empty())
    sc.diag_dt = to_double("diag.dt", v);

  if (std::string v = take("snapshots"); !v.empty())
    sc.snapshot_times = to_list("snapshots", v);
  if (std::string v = take("slice.extent"); !v.empty())
    sc.slice.extent = to_double("slice.extent", v);
  if (std::string v = take("slice.n"); !v.empty())
    sc.slice.n = to_int("slice.n", v);
  if (std::string v = take("slice.full"); !v.empty())
    sc.slice.full_vector = to_int("slice.full", v) != 0;

  if (!kv.empty())
    throw std::invalid_argument("config: unknown key '" + kv.begin()->first + "'");

  if (!cloak_disabled) sc.cloak = cloak;
  sc.validate();
  return sc;
}

Scenario parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace tdnrbc

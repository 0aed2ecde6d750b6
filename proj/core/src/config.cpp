#include "rotrate/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "rotrate/errors.hpp"

namespace rotrate {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const std::string t = trim(text);
  const char* first = t.data();
  if (!t.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw ParseError("config key '" + key + "': not a number: '" + text + "'");
  }
  return v;
}

std::vector<double> numbers(const std::string& key, std::string text) {
  for (char& c : text) {
    if (c == ',') c = ' ';
  }
  std::stringstream ss(text);
  std::vector<double> out;
  std::string tok;
  while (ss >> tok) out.push_back(to_double(key, tok));
  return out;
}

}  // namespace

ConfigMap ConfigMap::parse(const std::string& text, const std::string& origin) {
  ConfigMap cfg;
  std::stringstream ss(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ParseError(origin + ":" + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw ParseError(origin + ":" + std::to_string(line_no) + ": empty key");
    cfg.values_[key] = trim(t.substr(eq + 1));
  }
  return cfg;
}

ConfigMap ConfigMap::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

void ConfigMap::merge(const ConfigMap& other) {
  for (const auto& [k, v] : other.values_) values_[k] = v;
}

std::optional<std::string> ConfigMap::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> ConfigMap::get_double(const std::string& key) const {
  const auto v = get(key);
  if (!v) return std::nullopt;
  return to_double(key, *v);
}

std::optional<std::int64_t> ConfigMap::get_int(const std::string& key) const {
  const auto v = get(key);
  if (!v) return std::nullopt;
  // Accept 1e5-style values as long as they are integral.
  const double d = to_double(key, *v);
  if (d != static_cast<double>(static_cast<std::int64_t>(d))) {
    throw ParseError("config key '" + key + "': not an integer: '" + *v + "'");
  }
  return static_cast<std::int64_t>(d);
}

std::optional<bool> ConfigMap::get_bool(const std::string& key) const {
  const auto v = get(key);
  if (!v) return std::nullopt;
  if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
  if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
  throw ParseError("config key '" + key + "': not a boolean: '" + *v + "'");
}

std::optional<PlanarPoint> ConfigMap::get_point(const std::string& key) const {
  const auto v = get(key);
  if (!v) return std::nullopt;
  const auto xs = numbers(key, *v);
  if (xs.size() != 2) throw ParseError("config key '" + key + "': expected two numbers");
  return PlanarPoint{xs[0], xs[1]};
}

std::optional<FourierCurve> ConfigMap::get_curve(const std::string& key) const {
  const auto name = get(key);
  if (!name) return std::nullopt;
  if (*name == "fish") return fish_curve();
  if (*name == "flower") return flower_curve();
  if (*name != "custom") throw ParseError("config key '" + key + "': unknown curve '" + *name + "'");
  FourierCurve curve;
  const std::string prefix = key + ".coefficient.";
  for (const auto& [k, v] : values_) {
    if (k.rfind(prefix, 0) != 0) continue;
    const std::string harmonic = k.substr(prefix.size());
    int h = 0;
    const auto res = std::from_chars(harmonic.data(), harmonic.data() + harmonic.size(), h);
    if (res.ec != std::errc() || res.ptr != harmonic.data() + harmonic.size()) {
      throw ParseError("config key '" + k + "': bad harmonic index");
    }
    const auto c = numbers(k, v);
    if (c.size() != 2) throw ParseError("config key '" + k + "': expected 're im'");
    curve.coefficients.emplace_back(h, std::complex<double>(c[0], c[1]));
  }
  if (curve.coefficients.empty()) {
    throw ParseError("config key '" + key + "': custom curve without coefficients");
  }
  return curve;
}

}  // namespace rotrate

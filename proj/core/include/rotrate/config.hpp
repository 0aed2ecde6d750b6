#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "rotrate/projections.hpp"

namespace rotrate {

/// Flat key = value settings. Lines starting with '#' and blank lines are
/// ignored; later keys replace earlier ones.
class ConfigMap {
 public:
  static ConfigMap parse(const std::string& text, const std::string& origin = "<string>");
  static ConfigMap load(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  /// Copies every key of other over this map.
  void merge(const ConfigMap& other);
  bool contains(const std::string& key) const { return values_.count(key) != 0; }

  std::optional<std::string> get(const std::string& key) const;
  std::optional<double> get_double(const std::string& key) const;
  std::optional<std::int64_t> get_int(const std::string& key) const;
  std::optional<bool> get_bool(const std::string& key) const;
  /// "x y" or "x,y".
  std::optional<PlanarPoint> get_point(const std::string& key) const;

  /// Curve named by `key` (fish, flower or custom). A custom curve lists its
  /// harmonics as `<key>.coefficient.<k> = re im`.
  std::optional<FourierCurve> get_curve(const std::string& key) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace rotrate

#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "rotrate/projections.hpp"

namespace rotrate {

/// 17 significant digits; parses back to the same double.
std::string format_double(double v);

/// Streams rows of a headed CSV file. Integral columns are written as
/// integers when the value is integral and below 2^53.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string> header);
  void row(std::initializer_list<double> values);
  void row(std::span<const double> values);
  void close();

 private:
  std::ofstream out_;
  std::filesystem::path path_;
  std::size_t columns_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  /// Index of a header column; throws ParseError if absent.
  std::size_t column(const std::string& name) const;
};

/// Reads a headed numeric CSV. Throws ParseError on I/O failure or malformed
/// content (ragged rows, non-numeric cells).
CsvTable read_csv(const std::filesystem::path& path);

struct ObservationFile {
  bool planar = false;
  std::vector<double> phi;
  std::vector<PlanarPoint> points;
  std::size_t size() const { return planar ? points.size() : phi.size(); }
};

/// Accepts headers (n,phi), (phi), (n,x,y) or (x,y). Throws UsageError for
/// an empty file and ParseError for an unknown layout.
ObservationFile read_observations(const std::filesystem::path& path);

void write_angle_observations(const std::filesystem::path& path, std::span<const double> phi);
void write_planar_observations(const std::filesystem::path& path,
                               std::span<const PlanarPoint> points);

}  // namespace rotrate

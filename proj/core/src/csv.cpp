#include "rotrate/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "rotrate/errors.hpp"

namespace rotrate {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::string format_cell(double v) {
  if (v == std::floor(v) && std::abs(v) < 9007199254740992.0) {
    return std::to_string(static_cast<long long>(v));
  }
  return format_double(v);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& cell, std::size_t line_no) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (cell.empty() || res.ec != std::errc() || res.ptr != last) {
    throw ParseError("line " + std::to_string(line_no) + ": not a number: '" + cell + "'");
  }
  return v;
}

}  // namespace

CsvWriter::CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string> header)
    : out_(path), path_(path), columns_(header.size()) {
  if (!out_) throw ParseError("cannot open " + path.string() + " for writing");
  bool first = true;
  for (const auto& h : header) {
    if (!first) out_ << ',';
    out_ << h;
    first = false;
  }
  out_ << '\n';
}

void CsvWriter::row(std::initializer_list<double> values) {
  row(std::span<const double>(values.begin(), values.size()));
}

void CsvWriter::row(std::span<const double> values) {
  if (values.size() != columns_) throw UsageError("CsvWriter: wrong number of columns");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ << ',';
    out_ << format_cell(values[i]);
  }
  out_ << '\n';
}

void CsvWriter::close() {
  out_.close();
  if (!out_) throw ParseError("failed writing " + path_.string());
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ParseError("missing column '" + name + "'");
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (table.header.empty()) {
      table.header = split(line);
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != table.header.size()) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(table.header.size()) + " columns, found " +
                       std::to_string(cells.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_number(c, line_no));
    table.rows.push_back(std::move(row));
  }
  return table;
}

ObservationFile read_observations(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  if (t.header.empty() || t.rows.empty()) {
    throw UsageError("observation file " + path.string() + " is empty");
  }
  auto has = [&](const char* name) {
    return std::find(t.header.begin(), t.header.end(), name) != t.header.end();
  };
  ObservationFile obs;
  if (has("phi")) {
    const std::size_t c = t.column("phi");
    obs.phi.reserve(t.rows.size());
    for (const auto& r : t.rows) obs.phi.push_back(r[c]);
  } else if (has("x") && has("y")) {
    obs.planar = true;
    const std::size_t cx = t.column("x");
    const std::size_t cy = t.column("y");
    obs.points.reserve(t.rows.size());
    for (const auto& r : t.rows) obs.points.push_back({r[cx], r[cy]});
  } else {
    throw ParseError("observation file needs a 'phi' column or 'x','y' columns");
  }
  return obs;
}

void write_angle_observations(const std::filesystem::path& path, std::span<const double> phi) {
  CsvWriter w(path, {"n", "phi"});
  for (std::size_t n = 0; n < phi.size(); ++n) w.row({static_cast<double>(n), phi[n]});
  w.close();
}

void write_planar_observations(const std::filesystem::path& path,
                               std::span<const PlanarPoint> points) {
  CsvWriter w(path, {"n", "x", "y"});
  for (std::size_t n = 0; n < points.size(); ++n) {
    w.row({static_cast<double>(n), points[n].x, points[n].y});
  }
  w.close();
}

}  // namespace rotrate

#include "discflux/csv_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "discflux/errors.hpp"

namespace discflux {
namespace {

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
  return out;
}

double linear(const std::vector<double>& xs, const std::vector<double>& ys,
              double x) {
  std::size_t k = static_cast<std::size_t>(
      std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
  k = std::clamp<std::size_t>(k, 1, xs.size() - 1);
  const double t = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
  return ys[k - 1] + t * (ys[k] - ys[k - 1]);
}

}  // namespace

const std::vector<double>& CsvTable::column(const std::string& name) const {
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == name) return columns[c];
  }
  throw ConfigError("CSV column '" + name + "' missing");
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::stringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto cells = split(line);
    if (table.header.empty()) {
      table.header = cells;
      table.columns.resize(cells.size());
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw ConfigError("CSV line " + std::to_string(lineno) +
                        ": expected " + std::to_string(table.header.size()) +
                        " fields");
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      char* end = nullptr;
      const double value = std::strtod(cells[c].c_str(), &end);
      if (cells[c].empty() || *end != '\0') {
        throw ConfigError("CSV line " + std::to_string(lineno) +
                          ": not a number: '" + cells[c] + "'");
      }
      table.columns[c].push_back(value);
    }
  }
  if (table.header.empty()) throw ConfigError("CSV has no header");
  return table;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
  if (!out) throw ConfigError("write failed: " + path.string());
}

FluxPair flux_from_csv(const std::string& text, std::size_t intervals) {
  const CsvTable t = parse_csv(text);
  const auto& u = t.column("u");
  const auto& f = t.column("f");
  const auto& g = t.column("g");
  if (u.size() < 2) throw ConfigError("flux table needs at least two rows");
  bool uniform = true;
  const double h = (u.back() - u.front()) / static_cast<double>(u.size() - 1);
  for (std::size_t k = 1; k < u.size(); ++k) {
    if (!(u[k] > u[k - 1])) throw ConfigError("flux table u must increase");
    if (std::abs(u[k] - u[k - 1] - h) > 1e-9 * std::abs(h)) uniform = false;
  }
  if (intervals == 0) intervals = uniform ? u.size() - 1 : kDefaultSamples;
  if (uniform && intervals == u.size() - 1) {
    return FluxPair(SampledFunction(u.front(), u.back(), f),
                    SampledFunction(u.front(), u.back(), g));
  }
  return FluxPair::sample(
      u.front(), u.back(), intervals, [&](double x) { return linear(u, f, x); },
      [&](double x) { return linear(u, g, x); });
}

std::string snapshot_to_csv(std::span<const double> x, std::span<const double> u,
                            std::span<const double> v) {
  std::string out = "x,u,v\n";
  char line[128];
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", x[i], u[i], v[i]);
    out += line;
  }
  return out;
}

}  // namespace discflux

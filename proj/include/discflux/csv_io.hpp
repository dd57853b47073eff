#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "discflux/flux_model.hpp"

namespace discflux {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  /// Throws ConfigError if the column is missing.
  const std::vector<double>& column(const std::string& name) const;
  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

/// Header row plus numeric rows; blank lines and '#' comments are skipped.
/// Throws ConfigError on ragged or non-numeric rows.
CsvTable parse_csv(const std::string& text);

/// Throws ConfigError when the file cannot be read or written.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Flux table with columns u, f, g (u strictly increasing). Resampled onto a
/// uniform lattice of `intervals` (0 keeps the row count when the table is
/// already uniform, otherwise kDefaultSamples).
FluxPair flux_from_csv(const std::string& text, std::size_t intervals = 0);

/// Columns x, u, v at %.17g.
std::string snapshot_to_csv(std::span<const double> x, std::span<const double> u,
                            std::span<const double> v);

}  // namespace discflux

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace discflux {

/// Strictly increasing piecewise-linear map given by a breakpoint table.
/// Outside [domain_lo, domain_hi] the end segments are extended linearly so
/// the map stays a bijection of the real line; the inverse does the same.
class MonotoneBijection {
 public:
  /// Throws ArgumentError unless both columns are strictly increasing.
  MonotoneBijection(std::vector<double> breakpoints, std::vector<double> values);

  /// Accepts any table of matching sizes; used to audit ingested files.
  static MonotoneBijection unchecked(std::vector<double> breakpoints,
                                    std::vector<double> values);

  static MonotoneBijection identity(double lo, double hi);
  /// u -> u + shift on [lo, hi].
  static MonotoneBijection translation(double lo, double hi, double shift);

  double operator()(double u) const { return forward(u); }
  double forward(double u) const;
  double inverse(double y) const;

  double domain_lo() const noexcept { return breakpoints_.front(); }
  double domain_hi() const noexcept { return breakpoints_.back(); }
  double range_lo() const noexcept { return values_.front(); }
  double range_hi() const noexcept { return values_.back(); }

  std::span<const double> breakpoints() const noexcept { return breakpoints_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return breakpoints_.size(); }

  /// Smallest and largest segment slope.
  double min_slope() const;
  double max_slope() const;

  /// Index of the first segment whose breakpoints or values fail to
  /// increase strictly, if any.
  std::optional<std::size_t> first_violation() const;

 private:
  MonotoneBijection() = default;

  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

}  // namespace discflux

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace discflux {

/// Initial profile u0(x) on the real line.
class InitialData {
 public:
  using Profile = std::function<double(double)>;

  InitialData(Profile profile, std::string description)
      : profile_(std::move(profile)), description_(std::move(description)) {}

  static InitialData constant(double k);
  /// u_left for x <= 0, u_right for x > 0.
  static InitialData riemann(double u_left, double u_right);
  /// levels[i] on (breaks[i-1], breaks[i]]; breaks sorted, one fewer than
  /// levels.
  static InitialData piecewise_constant(std::vector<double> breaks,
                                        std::vector<double> levels);
  /// `jumps` jump locations uniform in (-half_width, half_width) and
  /// `jumps + 1` levels uniform in [a, b], from a seeded generator.
  static InitialData random_bv(std::uint64_t seed, int jumps, double a,
                               double b, double half_width);
  /// Piecewise-linear through (xs, us), constant beyond the ends.
  static InitialData table(std::vector<double> xs, std::vector<double> us);

  double operator()(double x) const { return profile_(x); }
  std::vector<double> cell_values(std::span<const double> x) const;
  const std::string& description() const noexcept { return description_; }

 private:
  Profile profile_;
  std::string description_;
};

/// Pointwise maximum of two profiles (used to build ordered pairs).
InitialData pointwise_max(const InitialData& lhs, const InitialData& rhs);

}  // namespace discflux

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "axioquad/error.hpp"
#include "axioquad/expr.hpp"

namespace axioquad {

// Strictly increasing grid x0 < x1 < ... < xn, n >= 1.
class Partition {
 public:
  explicit Partition(std::vector<double> points);
  static Partition uniform(double x, double y, std::size_t cells);

  [[nodiscard]] std::span<const double> points() const noexcept { return points_; }
  [[nodiscard]] std::size_t cells() const noexcept { return points_.size() - 1; }
  [[nodiscard]] double front() const noexcept { return points_.front(); }
  [[nodiscard]] double back() const noexcept { return points_.back(); }

  // Concatenation of a partition of [x, y] with one of [y, z].
  [[nodiscard]] Partition joined(const Partition& next) const;

 private:
  std::vector<double> points_;
};

struct DarbouxBracket {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t partition_size = 0;
  int samples_per_cell = 0;
  double width = 0.0;
};

enum class IntegrationMethod { ftc, darboux };

struct IntegralResult {
  double value = 0.0;
  double error_bound = 0.0;
  IntegrationMethod method = IntegrationMethod::darboux;
  std::uint64_t evaluations = 0;
  std::optional<DarbouxBracket> bracket;
};

// The refinement chain reached the cell cap before the bracket narrowed
// below eps. Carries the narrowest bracket seen.
class NoConvergenceError : public Error {
 public:
  NoConvergenceError(const std::string& what, DarbouxBracket best, std::uint64_t evaluations);
  [[nodiscard]] std::string_view kind() const noexcept override { return "no-convergence"; }
  [[nodiscard]] const DarbouxBracket& best() const noexcept { return best_; }
  [[nodiscard]] std::uint64_t evaluations() const noexcept { return evaluations_; }

 private:
  DarbouxBracket best_;
  std::uint64_t evaluations_;
};

inline constexpr int kDefaultSamplesPerCell = 17;
inline constexpr double kDefaultEps = 1e-6;

// Sampled-extremum Darboux sums: each cell contributes the min (max) of rho
// over `samples_per_cell` equispaced points, endpoints included, times the
// cell width. Summed left to right with compensation.
[[nodiscard]] double lower_sum(const Function& rho, const Partition& p, int samples_per_cell = kDefaultSamplesPerCell);
[[nodiscard]] double upper_sum(const Function& rho, const Partition& p, int samples_per_cell = kDefaultSamplesPerCell);

struct RefineOptions {
  int samples_per_cell = 3;
  std::size_t initial_cells = 16;
  std::size_t max_cells = std::size_t{1} << 22;
};

// Uniform partitions of 16, 32, 64, ... cells until the bracket is narrower
// than eps and one further doubling moves neither sum by eps or more.
// Sample values are reused between levels: each doubling evaluates rho only
// at the new grid points.
[[nodiscard]] DarbouxBracket refine_until(const Function& rho, double x, double y, double eps = kDefaultEps,
                                          const RefineOptions& options = {}, std::uint64_t* evaluations = nullptr);

// Midpoint of the refine_until bracket, extended by I(x, x) = 0 and
// I(x, y) = -I(y, x).
[[nodiscard]] IntegralResult darboux_integral(const Function& rho, double x, double y, double eps = kDefaultEps,
                                              const RefineOptions& options = {});

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) noexcept;
  [[nodiscard]] double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace axioquad

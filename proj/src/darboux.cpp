#include "axioquad/darboux.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace axioquad {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double eval_in_cell(const Function& rho, double t, std::size_t cell) {
  try {
    return rho(t);
  } catch (const Error& e) {
    throw EvaluationError("cell " + std::to_string(cell) + ": " + e.what());
  }
}

void check_sum_args(const Function& rho, const Partition& p, int samples_per_cell) {
  if (samples_per_cell < 2) throw PreconditionError("samples_per_cell must be at least 2");
  if (!rho.domain().contains(p.front()) || !rho.domain().contains(p.back()))
    throw PreconditionError("partition [" + num(p.front()) + ", " + num(p.back()) + "] leaves the function domain");
}

template <class Pick>
double darboux_sum(const Function& rho, const Partition& p, int samples_per_cell, Pick pick) {
  check_sum_args(rho, p, samples_per_cell);
  const auto pts = p.points();
  const int last = samples_per_cell - 1;
  CompensatedSum sum;
  for (std::size_t k = 1; k < pts.size(); ++k) {
    const double a = pts[k - 1];
    const double b = pts[k];
    const double w = b - a;
    const double spacing = w / last;
    double best = eval_in_cell(rho, a, k - 1);
    for (int j = 1; j <= last; ++j) {
      const double t = j == last ? b : a + j * spacing;
      best = pick(best, eval_in_cell(rho, t, k - 1));
    }
    sum.add(best * w);
  }
  return sum.value();
}

// Sample values of rho on the uniform grid x + k*step, refined by halving
// the step; earlier values are kept.
class SampleGrid {
 public:
  SampleGrid(const Function& rho, double x, double y, std::size_t intervals)
      : rho_(rho), x_(x), y_(y), intervals_(intervals), step_((y - x) / static_cast<double>(intervals)) {
    values_.resize(intervals_ + 1);
    for (std::size_t k = 0; k <= intervals_; ++k) values_[k] = eval(k);
  }

  void halve_step() {
    std::vector<double> next(2 * intervals_ + 1);
    intervals_ *= 2;
    step_ = (y_ - x_) / static_cast<double>(intervals_);
    for (std::size_t k = 0; k < next.size(); k += 2) next[k] = values_[k / 2];
    values_.swap(next);
    for (std::size_t k = 1; k < intervals_; k += 2) values_[k] = eval(k);
  }

  [[nodiscard]] double position(std::size_t k) const {
    return k == intervals_ ? y_ : x_ + static_cast<double>(k) * step_;
  }
  [[nodiscard]] double value(std::size_t k) const { return values_[k]; }
  [[nodiscard]] std::size_t intervals() const { return intervals_; }
  [[nodiscard]] std::uint64_t evaluations() const { return evaluations_; }

 private:
  double eval(std::size_t k) {
    ++evaluations_;
    try {
      return rho_(position(k));
    } catch (const Error& e) {
      throw EvaluationError("grid point " + std::to_string(k) + ": " + e.what());
    }
  }

  const Function& rho_;
  double x_, y_;
  std::size_t intervals_;
  double step_;
  std::vector<double> values_;
  std::uint64_t evaluations_ = 0;
};

DarbouxBracket bracket_on(const SampleGrid& grid, int samples_per_cell) {
  const std::size_t per = static_cast<std::size_t>(samples_per_cell - 1);
  const std::size_t cells = grid.intervals() / per;
  CompensatedSum lower, upper;
  for (std::size_t c = 0; c < cells; ++c) {
    const std::size_t first = c * per;
    double lo = grid.value(first), hi = lo;
    for (std::size_t k = first + 1; k <= first + per; ++k) {
      lo = std::min(lo, grid.value(k));
      hi = std::max(hi, grid.value(k));
    }
    const double w = grid.position(first + per) - grid.position(first);
    lower.add(lo * w);
    upper.add(hi * w);
  }
  DarbouxBracket b;
  b.lower = lower.value();
  b.upper = std::max(upper.value(), b.lower);
  b.partition_size = cells;
  b.samples_per_cell = samples_per_cell;
  b.width = b.upper - b.lower;
  return b;
}

}  // namespace

void CompensatedSum::add(double v) noexcept {
  const double t = sum_ + v;
  if (std::fabs(sum_) >= std::fabs(v))
    compensation_ += (sum_ - t) + v;
  else
    compensation_ += (v - t) + sum_;
  sum_ = t;
}

Partition::Partition(std::vector<double> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw PreconditionError("a partition needs at least two points");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i])) throw PreconditionError("partition points must be finite");
    if (i && !(points_[i - 1] < points_[i])) throw PreconditionError("partition points must be strictly increasing");
  }
}

Partition Partition::uniform(double x, double y, std::size_t cells) {
  if (cells < 1 || !(x < y)) throw PreconditionError("uniform partition needs x < y and at least one cell");
  std::vector<double> pts(cells + 1);
  const double step = (y - x) / static_cast<double>(cells);
  for (std::size_t k = 0; k < cells; ++k) pts[k] = x + static_cast<double>(k) * step;
  pts[cells] = y;
  return Partition(std::move(pts));
}

Partition Partition::joined(const Partition& next) const {
  if (back() != next.front()) throw PreconditionError("partitions do not share an endpoint");
  std::vector<double> pts = points_;
  pts.insert(pts.end(), next.points_.begin() + 1, next.points_.end());
  return Partition(std::move(pts));
}

NoConvergenceError::NoConvergenceError(const std::string& what, DarbouxBracket best, std::uint64_t evaluations)
    : Error(what), best_(best), evaluations_(evaluations) {}

double lower_sum(const Function& rho, const Partition& p, int samples_per_cell) {
  return darboux_sum(rho, p, samples_per_cell, [](double a, double b) { return std::min(a, b); });
}

double upper_sum(const Function& rho, const Partition& p, int samples_per_cell) {
  return darboux_sum(rho, p, samples_per_cell, [](double a, double b) { return std::max(a, b); });
}

DarbouxBracket refine_until(const Function& rho, double x, double y, double eps, const RefineOptions& options,
                            std::uint64_t* evaluations) {
  if (!(eps > 0.0)) throw PreconditionError("eps must be positive");
  if (!(x < y)) throw PreconditionError("refine_until needs x < y");
  if (options.samples_per_cell < 2) throw PreconditionError("samples_per_cell must be at least 2");
  if (options.initial_cells < 1) throw PreconditionError("initial_cells must be positive");
  if (!rho.domain().contains(x) || !rho.domain().contains(y))
    throw PreconditionError("[" + num(x) + ", " + num(y) + "] leaves the function domain");

  const std::size_t per = static_cast<std::size_t>(options.samples_per_cell - 1);
  SampleGrid grid(rho, x, y, options.initial_cells * per);
  std::optional<DarbouxBracket> prev;
  DarbouxBracket best;
  best.width = std::numeric_limits<double>::infinity();
  for (std::size_t cells = options.initial_cells;; cells *= 2) {
    if (cells > options.max_cells) {
      if (evaluations) *evaluations += grid.evaluations();
      throw NoConvergenceError("bracket width " + num(best.width) + " still >= eps " + num(eps) + " at " +
                                   std::to_string(best.partition_size) + " cells (cap " +
                                   std::to_string(options.max_cells) + ")",
                               best, grid.evaluations());
    }
    if (prev) grid.halve_step();
    const DarbouxBracket b = bracket_on(grid, options.samples_per_cell);
    if (b.width <= best.width) best = b;
    if (prev && prev->width < eps && b.width < eps && std::fabs(b.lower - prev->lower) < eps &&
        std::fabs(b.upper - prev->upper) < eps) {
      if (evaluations) *evaluations += grid.evaluations();
      return b;
    }
    prev = b;
  }
}

IntegralResult darboux_integral(const Function& rho, double x, double y, double eps, const RefineOptions& options) {
  if (!(eps > 0.0)) throw PreconditionError("eps must be positive");
  IntegralResult r;
  r.method = IntegrationMethod::darboux;
  if (x == y) {
    if (!rho.domain().contains(x)) throw PreconditionError("point " + num(x) + " leaves the function domain");
    r.bracket = DarbouxBracket{0.0, 0.0, 0, options.samples_per_cell, 0.0};
    return r;
  }
  const bool flipped = x > y;
  DarbouxBracket b = flipped ? refine_until(rho, y, x, eps, options, &r.evaluations)
                             : refine_until(rho, x, y, eps, options, &r.evaluations);
  if (flipped) b = DarbouxBracket{-b.upper, -b.lower, b.partition_size, b.samples_per_cell, b.width};
  r.value = 0.5 * (b.lower + b.upper);
  r.error_bound = 0.5 * b.width;
  r.bracket = b;
  return r;
}

}  // namespace axioquad

#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Core>

namespace qpoi {

// Axis-aligned box of feasible decisions; finite bounds, lower < upper.
struct SearchBox {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  int dim() const { return static_cast<int>(lower.size()); }
  double width(int i) const { return upper[i] - lower[i]; }
  Eigen::VectorXd clip(Eigen::VectorXd x) const;
  bool contains(const Eigen::VectorXd& x) const;
  // For a batch of q points sharing this box: the concatenated q*d box.
  SearchBox replicated(int q) const;
  // Throws ConfigError on non-finite or inverted bounds.
  void validate() const;
};

// Evaluation budget of the maximizer. max_evals counts objective calls across
// all runs; each run is additionally capped at 2000 generations, and up to
// `restarts` fresh runs may follow the first when budget remains.
struct OptimizerBudget {
  int max_evals{0};  // 0: auto (2000 generations of the default population)
  int restarts{1};
  std::uint64_t seed{0};
};

struct OptimResult {
  Eigen::VectorXd argmax;
  double value{0.0};
  int evals_used{0};
};

// Default population size 4 + floor(3 ln dim).
int default_population(int dim);

// Maximizes a black-box objective over the box with a compact (mu/mu_w,
// lambda) evolution strategy with covariance adaptation. Box handling is
// resample-then-clip. Deterministic for a fixed budget.seed; ties keep the
// earlier incumbent. The objective must be total on the box; anything it
// throws is propagated nested in a NumericalError carrying context.
OptimResult maximize(const std::function<double(const Eigen::VectorXd&)>& objective,
                     const SearchBox& box, const OptimizerBudget& budget);

}  // namespace qpoi

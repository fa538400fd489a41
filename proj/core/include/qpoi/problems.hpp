#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "qpoi/cmaes.hpp"
#include "qpoi/pareto.hpp"

namespace qpoi {

// A box-constrained multi-objective minimization problem.
struct Problem {
  std::string name;
  int d = 0;
  int m = 2;
  SearchBox box;
  std::function<std::array<double, 2>(const Eigen::VectorXd&)> evaluate;
};

// The standard ZDT test functions (idx in {1, 2, 3}): f1 = x1,
// g = 1 + 9 * sum_{i>=2} x_i / (d - 1), and the family-specific f2.
// Throws std::domain_error when x leaves [0, 1]^d or d < 2.
std::array<double, 2> zdt(int idx, const Eigen::VectorXd& x);

enum class FrontKind { kConvex, kConcave };

// Parses "convex" or "concave"; throws ConfigError otherwise.
FrontKind front_kind_from_string(const std::string& name);
std::string to_string(FrontKind kind);

// Quarter-circle approximation sets of n mutually non-dominated points at
// scale R > 0, with angles theta_k = (k - 1/2) * (pi/2) / n at the midpoints
// of n equal arcs. Concave: (R cos t, R sin t); convex:
// (R (1 - sin t), R (1 - cos t)).
ParetoArchive synthetic_front(FrontKind kind, int n, double R);

struct SyntheticFront {
  FrontKind kind = FrontKind::kConcave;
  int n = 1;
  double R = 1.0;

  ParetoArchive generate() const { return synthetic_front(kind, n, R); }
};

// Registry of the shipped problems: zdt1, zdt2, zdt3 (d >= 2, box [0,1]^d),
// linear (f = (x1, 1 - x1), box [0,1]^d) and schaffer (f = (x1^2, (x1-2)^2),
// box [-5,5]^d). Throws ConfigError on unknown names, listing valid ones.
Problem make_problem(const std::string& name, int dim);
std::vector<std::string> problem_names();

// Finite hypervolume reporting reference: (11, 11) for the ZDT family,
// (2, 2) for linear, (30, 30) for schaffer.
std::array<double, 2> default_hv_reference(const std::string& name);

}  // namespace qpoi

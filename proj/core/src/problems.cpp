#include "qpoi/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qpoi/errors.hpp"

namespace qpoi {
namespace {

SearchBox unit_box(int dim) {
  SearchBox box;
  box.lower = Eigen::VectorXd::Zero(dim);
  box.upper = Eigen::VectorXd::Ones(dim);
  return box;
}

SearchBox symmetric_box(int dim, double half_width) {
  SearchBox box;
  box.lower = Eigen::VectorXd::Constant(dim, -half_width);
  box.upper = Eigen::VectorXd::Constant(dim, half_width);
  return box;
}

}  // namespace

std::array<double, 2> zdt(int idx, const Eigen::VectorXd& x) {
  if (idx < 1 || idx > 3) {
    throw ConfigError("zdt: index must be 1, 2 or 3");
  }
  const int d = static_cast<int>(x.size());
  if (d < 2) {
    throw std::domain_error("zdt: requires dimension >= 2");
  }
  for (int i = 0; i < d; ++i) {
    if (!(x(i) >= 0.0 && x(i) <= 1.0)) {
      throw std::domain_error("zdt: input outside the unit box");
    }
  }
  const double f1 = x(0);
  const double g = 1.0 + 9.0 * x.tail(d - 1).sum() / (d - 1);
  const double r = f1 / g;
  double f2 = 0.0;
  switch (idx) {
    case 1:
      f2 = g * (1.0 - std::sqrt(r));
      break;
    case 2:
      f2 = g * (1.0 - r * r);
      break;
    default:
      f2 = g * (1.0 - std::sqrt(r) - r * std::sin(10.0 * std::numbers::pi * f1));
      break;
  }
  return {f1, f2};
}

FrontKind front_kind_from_string(const std::string& name) {
  if (name == "convex") return FrontKind::kConvex;
  if (name == "concave") return FrontKind::kConcave;
  throw ConfigError("unknown front kind '" + name +
                    "' (expected convex or concave)");
}

std::string to_string(FrontKind kind) {
  return kind == FrontKind::kConvex ? "convex" : "concave";
}

ParetoArchive synthetic_front(FrontKind kind, int n, double R) {
  if (n < 1) throw ConfigError("synthetic_front: n must be >= 1");
  if (!(R > 0.0)) throw ConfigError("synthetic_front: R must be positive");
  ParetoArchive archive;
  for (int k = 1; k <= n; ++k) {
    const double t = (k - 0.5) * (std::numbers::pi / 2.0) / n;
    std::array<double, 2> p;
    if (kind == FrontKind::kConcave) {
      p = {R * std::cos(t), R * std::sin(t)};
    } else {
      p = {R * (1.0 - std::sin(t)), R * (1.0 - std::cos(t))};
    }
    archive.insert(p);
  }
  return archive;
}

Problem make_problem(const std::string& name, int dim) {
  if (dim < 1) throw ConfigError("make_problem: dim must be >= 1");
  Problem p;
  p.name = name;
  p.d = dim;
  if (name == "zdt1" || name == "zdt2" || name == "zdt3") {
    if (dim < 2) throw ConfigError("make_problem: ZDT requires dim >= 2");
    const int idx = name[3] - '0';
    p.box = unit_box(dim);
    p.evaluate = [idx](const Eigen::VectorXd& x) { return zdt(idx, x); };
    return p;
  }
  if (name == "linear") {
    p.box = unit_box(dim);
    p.evaluate = [](const Eigen::VectorXd& x) {
      return std::array<double, 2>{x(0), 1.0 - x(0)};
    };
    return p;
  }
  if (name == "schaffer") {
    p.box = symmetric_box(dim, 5.0);
    p.evaluate = [](const Eigen::VectorXd& x) {
      return std::array<double, 2>{x(0) * x(0), (x(0) - 2.0) * (x(0) - 2.0)};
    };
    return p;
  }
  std::string valid;
  for (const auto& known : problem_names()) {
    valid += valid.empty() ? known : ", " + known;
  }
  throw ConfigError("unknown problem '" + name + "' (expected one of: " +
                    valid + ")");
}

std::vector<std::string> problem_names() {
  return {"zdt1", "zdt2", "zdt3", "linear", "schaffer"};
}

std::array<double, 2> default_hv_reference(const std::string& name) {
  if (name == "linear") return {2.0, 2.0};
  if (name == "schaffer") return {30.0, 30.0};
  return {11.0, 11.0};
}

}  // namespace qpoi

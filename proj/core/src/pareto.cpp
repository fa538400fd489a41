#include "qpoi/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qpoi {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

bool dominates(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw std::domain_error("dominates: vectors of unequal length");
  }
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
    if (a[i] < b[i]) strict = true;
  }
  return strict;
}

bool dominates(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  return a[0] <= b[0] && a[1] <= b[1] && (a[0] < b[0] || a[1] < b[1]);
}

ParetoArchive::ParetoArchive(const std::vector<std::array<double, 2>>& pts) {
  for (const auto& p : pts) insert(p);
}

bool ParetoArchive::insert(const std::array<double, 2>& y) {
  // The candidate is weakly dominated iff the member with the largest
  // f1 <= y1 has f2 <= y2 (f2 is strictly decreasing along the sorted view).
  auto gt = std::upper_bound(pts_.begin(), pts_.end(), y,
                             [](const auto& a, const auto& b) { return a[0] < b[0]; });
  if (gt != pts_.begin() && (*(gt - 1))[1] <= y[1]) return false;

  // Points dominated by y form a contiguous run starting at the first
  // member with f1 >= y1.
  auto ge = std::lower_bound(pts_.begin(), pts_.end(), y,
                             [](const auto& a, const auto& b) { return a[0] < b[0]; });
  auto end = ge;
  while (end != pts_.end() && (*end)[1] >= y[1]) ++end;
  auto pos = pts_.erase(ge, end);
  pts_.insert(pos, y);
  return true;
}

bool ParetoArchive::improves(const std::array<double, 2>& y) const {
  auto gt = std::upper_bound(pts_.begin(), pts_.end(), y,
                             [](const auto& a, const auto& b) { return a[0] < b[0]; });
  if (gt == pts_.begin()) return true;
  const auto& p = *(gt - 1);  // largest f1 <= y1, smallest f2 among those
  return !dominates(p, y);
}

StripeSet stripes(const ParetoArchive& archive, const std::array<double, 2>& r) {
  const auto& pts = archive.points();
  const int n = static_cast<int>(pts.size());
  for (const auto& p : pts) {
    if (!(p[0] <= r[0] && p[1] <= r[1] && (p[0] < r[0] || p[1] < r[1]))) {
      throw std::domain_error(
          "stripes: archive point does not dominate the reference point");
    }
  }
  StripeSet out;
  out.stripes.reserve(n + 1);
  // Walk the front from largest f1 to smallest; sentinels (r1, -inf) before
  // the first point and (-inf, r2) after the last.
  for (int i = 1; i <= n + 1; ++i) {
    const double l1 = (i <= n) ? pts[n - i][0] : -kInf;
    const double u1 = (i >= 2) ? pts[n - i + 1][0] : r[0];
    const double u2 = (i <= n) ? pts[n - i][1] : r[1];
    out.stripes.push_back({{l1, -kInf}, {u1, u2}});
  }
  return out;
}

double hypervolume_2d(const ParetoArchive& archive,
                      const std::array<double, 2>& r) {
  if (!std::isfinite(r[0]) || !std::isfinite(r[1])) {
    throw std::domain_error("hypervolume_2d requires a finite reference point");
  }
  // Sweep the members strictly inside the reference box left to right; each
  // contributes the box between its f1, the next contributing f1 and r2.
  double hv = 0.0;
  double prev_f1 = kInf;
  const auto& pts = archive.points();
  for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
    const auto& p = *it;
    if (p[0] >= r[0] || p[1] >= r[1]) continue;
    const double right = std::min(prev_f1, r[0]);
    hv += (right - p[0]) * (r[1] - p[1]);
    prev_f1 = p[0];
  }
  return hv;
}

}  // namespace qpoi

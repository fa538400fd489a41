#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace qpoi {

// Strict Pareto dominance for minimization: a_i <= b_i everywhere and
// a_j < b_j somewhere. Throws std::domain_error on length mismatch.
bool dominates(const std::vector<double>& a, const std::vector<double>& b);
bool dominates(const std::array<double, 2>& a, const std::array<double, 2>& b);

// Mutually non-dominated bi-objective point set. Points are kept sorted
// ascending in f1 (equivalently descending in f2); both orders are strict,
// which the stripe decomposition requires. Value semantics: cheap to copy,
// no internal sharing.
class ParetoArchive {
 public:
  ParetoArchive() = default;
  explicit ParetoArchive(const std::vector<std::array<double, 2>>& pts);

  // Adds y unless an existing point weakly dominates it (equal points are
  // deduplicated, first insertion wins); removes every point y dominates.
  // Returns true if y entered the archive.
  bool insert(const std::array<double, 2>& y);

  // True iff no archive point strictly dominates y. Points coinciding with
  // an archive member count as improving.
  bool improves(const std::array<double, 2>& y) const;

  // Sorted view: ascending f1, descending f2.
  const std::vector<std::array<double, 2>>& points() const { return pts_; }
  std::size_t size() const { return pts_.size(); }
  bool empty() const { return pts_.empty(); }

 private:
  std::vector<std::array<double, 2>> pts_;
};

// One semi-infinite box of the non-dominated region decomposition. The lower
// corner always has l2 = -infinity; bounds may be +/-infinity.
struct Stripe {
  std::array<double, 2> lower;  // (l1, -inf)
  std::array<double, 2> upper;  // (u1, u2)
};

struct StripeSet {
  std::vector<Stripe> stripes;  // n+1 stripes for an archive of n points
};

// Decomposes the region that improves on `archive` and dominates `r` into
// size+1 disjoint stripes via the two sentinels (r1, -inf) and (-inf, r2).
// r may be (+inf, +inf) (the reference used by all PoI computations). Throws
// std::domain_error if a finite r is not dominated by every archive point.
StripeSet stripes(const ParetoArchive& archive, const std::array<double, 2>& r);

// Lebesgue measure of the region dominated by the archive and bounded by the
// finite reference point r; points not dominating r contribute nothing.
double hypervolume_2d(const ParetoArchive& archive,
                      const std::array<double, 2>& r);

}  // namespace qpoi

#pragma once

#include <algorithm>
#include <vector>

namespace oscint {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  constexpr double length() const noexcept { return hi - lo; }
  constexpr double mid() const noexcept { return 0.5 * (lo + hi); }
  constexpr bool contains(double x) const noexcept { return lo <= x && x <= hi; }
  constexpr bool contains(const Interval& o) const noexcept { return lo <= o.lo && o.hi <= hi; }

  friend constexpr bool operator==(const Interval&, const Interval&) = default;
};

Interval make_interval(double lo, double hi);

// Sorts and merges overlapping or touching intervals.
std::vector<Interval> merge_intervals(std::vector<Interval> pieces, double touch_tol = 0.0);

// Intersection of a sorted disjoint list with a single window.
std::vector<Interval> clip_intervals(const std::vector<Interval>& pieces, Interval window);

// Complement of a sorted disjoint list inside `window`.
std::vector<Interval> complement_in(const std::vector<Interval>& pieces, Interval window);

double total_length(const std::vector<Interval>& pieces);

}  // namespace oscint

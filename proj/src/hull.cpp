#include "slag/hull.hpp"

#include "slag/errors.hpp"

namespace slag {

std::vector<Eigen::Index> lower_hull(const Eigen::Ref<const Eigen::VectorXd>& xs,
                                     const Eigen::Ref<const Eigen::VectorXd>& ys) {
  if (xs.size() != ys.size() || xs.size() == 0) {
    throw DomainError("lower_hull: need matching, non-empty coordinate arrays");
  }
  std::vector<Eigen::Index> hull;
  hull.reserve(static_cast<std::size_t>(xs.size()));
  for (Eigen::Index k = 0; k < xs.size(); ++k) {
    while (hull.size() >= 2) {
      const Eigen::Index a = hull[hull.size() - 2];
      const Eigen::Index b = hull.back();
      const double cross = (xs(b) - xs(a)) * (ys(k) - ys(a)) - (ys(b) - ys(a)) * (xs(k) - xs(a));
      if (cross > 0) break;
      hull.pop_back();
    }
    hull.push_back(k);
  }
  return hull;
}

Eigen::VectorXd min_affine(const Eigen::Ref<const Eigen::VectorXd>& xs,
                           const Eigen::Ref<const Eigen::VectorXd>& ys,
                           const Eigen::Ref<const Eigen::VectorXd>& slopes) {
  for (Eigen::Index j = 1; j < slopes.size(); ++j) {
    if (!(slopes(j) >= slopes(j - 1))) throw DomainError("min_affine: slopes must be ascending");
  }
  const auto hull = lower_hull(xs, ys);
  Eigen::VectorXd out(slopes.size());
  std::size_t p = 0;
  for (Eigen::Index j = 0; j < slopes.size(); ++j) {
    const double s = slopes(j);
    double best = ys(hull[p]) - s * xs(hull[p]);
    while (p + 1 < hull.size()) {
      const double next = ys(hull[p + 1]) - s * xs(hull[p + 1]);
      if (next > best) break;
      best = next;
      ++p;
    }
    out(j) = best;
  }
  return out;
}

Eigen::VectorXd lower_hull_values(const Eigen::Ref<const Eigen::VectorXd>& xs,
                                  const Eigen::Ref<const Eigen::VectorXd>& ys) {
  const auto hull = lower_hull(xs, ys);
  Eigen::VectorXd out(xs.size());
  for (std::size_t v = 0; v + 1 < hull.size(); ++v) {
    const Eigen::Index a = hull[v];
    const Eigen::Index b = hull[v + 1];
    out(a) = ys(a);
    const double slope = (ys(b) - ys(a)) / (xs(b) - xs(a));
    for (Eigen::Index k = a + 1; k < b; ++k) out(k) = ys(a) + slope * (xs(k) - xs(a));
  }
  out(hull.back()) = ys(hull.back());
  return out;
}

}  // namespace slag

#pragma once

#include <Eigen/Dense>

#include <vector>

namespace slag {

/// Vertex indices of the lower convex hull of the points (xs[k], ys[k]),
/// xs strictly increasing. First and last points are always vertices;
/// collinear interior points are dropped.
std::vector<Eigen::Index> lower_hull(const Eigen::Ref<const Eigen::VectorXd>& xs,
                                     const Eigen::Ref<const Eigen::VectorXd>& ys);

/// For each slope s in the ascending list `slopes`, min_k (ys[k] - s * xs[k]).
/// Runs in O(K + |slopes|) by walking the lower hull.
Eigen::VectorXd min_affine(const Eigen::Ref<const Eigen::VectorXd>& xs,
                           const Eigen::Ref<const Eigen::VectorXd>& ys,
                           const Eigen::Ref<const Eigen::VectorXd>& slopes);

/// The lower convex hull of the points, evaluated at xs.
Eigen::VectorXd lower_hull_values(const Eigen::Ref<const Eigen::VectorXd>& xs,
                                  const Eigen::Ref<const Eigen::VectorXd>& ys);

}  // namespace slag

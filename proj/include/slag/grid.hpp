#pragma once

#include <Eigen/Dense>

#include <vector>

#include "slag/errors.hpp"

namespace slag {

/// Uniform node grid over an interval (n = 1) or rectangle (n = 2), boundary
/// nodes included. Cells are square: both axes share the spacing h. Values are
/// stored in lexicographic node order, index = i * ny + j.
class SpaceGrid {
 public:
  SpaceGrid() = default;

  /// Grid over [lower, upper] with counts[k] nodes on axis k. Throws
  /// DomainError if counts < 3 or the axes would not share one spacing.
  SpaceGrid(std::vector<double> lower, std::vector<double> upper,
            std::vector<Eigen::Index> counts);

  static SpaceGrid interval(double lo, double hi, Eigen::Index nx) {
    return SpaceGrid({lo}, {hi}, {nx});
  }
  static SpaceGrid rectangle(double x0, double x1, double y0, double y1, Eigen::Index nx,
                             Eigen::Index ny) {
    return SpaceGrid({x0, y0}, {x1, y1}, {nx, ny});
  }

  int dim() const { return static_cast<int>(counts_.size()); }
  Eigen::Index size() const { return values.size(); }
  Eigen::Index count(int axis) const { return counts_[axis]; }
  const std::vector<Eigen::Index>& counts() const { return counts_; }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  double spacing() const { return h_; }

  double coord(Eigen::Index i, int axis) const;
  Eigen::VectorXd point(Eigen::Index index) const;
  /// Per-axis integer coordinates of a node index.
  std::vector<Eigen::Index> multi(Eigen::Index index) const;
  Eigen::Index index(Eigen::Index i) const { return i; }
  Eigen::Index index(Eigen::Index i, Eigen::Index j) const { return i * counts_[1] + j; }

  bool isBoundary(Eigen::Index index) const;
  /// Boundary node indices in increasing (lexicographic) order.
  const std::vector<Eigen::Index>& boundaryIndices() const { return boundary_; }
  const std::vector<Eigen::Index>& interiorIndices() const { return interior_; }

  /// Same geometry, different values.
  SpaceGrid withValues(Eigen::VectorXd v) const;
  bool sameGeometry(const SpaceGrid& other) const;

  Eigen::VectorXd values;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<Eigen::Index> counts_;
  double h_ = 0.0;
  std::vector<Eigen::Index> boundary_;
  std::vector<Eigen::Index> interior_;
};

/// A one-parameter family of space functions: values(k, s) is the value at the
/// k-th sample of a 1-D parameter (time t or dual slope τ) and space node s.
struct SampledFamily {
  Eigen::VectorXd grid;
  std::vector<Eigen::Index> spaceShape;
  Eigen::MatrixXd values;

  Eigen::Index samples() const { return grid.size(); }
  Eigen::Index spaceSize() const { return values.cols(); }

  /// Throws DomainError unless grid is non-empty and strictly increasing,
  /// values has matching shape, and every value is finite.
  void validate() const;
};

/// n uniformly spaced samples of [lo, hi], endpoints exact.
Eigen::VectorXd uniform_samples(double lo, double hi, Eigen::Index n);

}  // namespace slag

#include "slag/grid.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace slag {

SpaceGrid::SpaceGrid(std::vector<double> lower, std::vector<double> upper,
                     std::vector<Eigen::Index> counts)
    : lower_(std::move(lower)), upper_(std::move(upper)), counts_(std::move(counts)) {
  if (counts_.empty() || counts_.size() > 2 || lower_.size() != counts_.size() ||
      upper_.size() != counts_.size()) {
    throw DomainError("SpaceGrid: only 1-D intervals and 2-D rectangles are supported");
  }
  for (std::size_t k = 0; k < counts_.size(); ++k) {
    if (counts_[k] < 3) throw DomainError("SpaceGrid: at least 3 nodes per axis");
    if (!(upper_[k] > lower_[k]) || !std::isfinite(lower_[k]) || !std::isfinite(upper_[k])) {
      throw DomainError("SpaceGrid: empty or non-finite axis bounds");
    }
  }
  h_ = (upper_[0] - lower_[0]) / static_cast<double>(counts_[0] - 1);
  if (counts_.size() == 2) {
    const double hy = (upper_[1] - lower_[1]) / static_cast<double>(counts_[1] - 1);
    if (std::abs(hy - h_) > 1e-12 * std::max(std::abs(h_), std::abs(hy))) {
      std::ostringstream os;
      os.precision(17);
      os << "SpaceGrid: cells must be square (hx = " << h_ << ", hy = " << hy << ")";
      throw DomainError(os.str());
    }
  }
  const Eigen::Index total =
      std::accumulate(counts_.begin(), counts_.end(), Eigen::Index{1}, std::multiplies<>());
  values = Eigen::VectorXd::Zero(total);
  for (Eigen::Index s = 0; s < total; ++s) {
    (isBoundary(s) ? boundary_ : interior_).push_back(s);
  }
}

double SpaceGrid::coord(Eigen::Index i, int axis) const {
  if (i == counts_[axis] - 1) return upper_[axis];
  return lower_[axis] + static_cast<double>(i) * h_;
}

std::vector<Eigen::Index> SpaceGrid::multi(Eigen::Index index) const {
  if (dim() == 1) return {index};
  return {index / counts_[1], index % counts_[1]};
}

Eigen::VectorXd SpaceGrid::point(Eigen::Index index) const {
  const auto m = multi(index);
  Eigen::VectorXd p(dim());
  for (int k = 0; k < dim(); ++k) p(k) = coord(m[k], k);
  return p;
}

bool SpaceGrid::isBoundary(Eigen::Index index) const {
  const auto m = multi(index);
  for (int k = 0; k < dim(); ++k) {
    if (m[k] == 0 || m[k] == counts_[k] - 1) return true;
  }
  return false;
}

SpaceGrid SpaceGrid::withValues(Eigen::VectorXd v) const {
  if (v.size() != size()) throw DomainError("SpaceGrid::withValues: size mismatch");
  SpaceGrid g = *this;
  g.values = std::move(v);
  return g;
}

bool SpaceGrid::sameGeometry(const SpaceGrid& other) const {
  return counts_ == other.counts_ && lower_ == other.lower_ && upper_ == other.upper_;
}

void SampledFamily::validate() const {
  if (grid.size() == 0) throw DomainError("SampledFamily: empty parameter grid");
  for (Eigen::Index k = 1; k < grid.size(); ++k) {
    if (!(grid(k) > grid(k - 1))) {
      throw DomainError("SampledFamily: parameter grid must be strictly increasing");
    }
  }
  if (!grid.allFinite()) throw DomainError("SampledFamily: non-finite parameter grid");
  const Eigen::Index space = std::accumulate(spaceShape.begin(), spaceShape.end(),
                                             Eigen::Index{1}, std::multiplies<>());
  if (values.rows() != grid.size() || values.cols() != space || space == 0) {
    throw DomainError("SampledFamily: values shape does not match grids");
  }
  if (!values.allFinite()) throw DomainError("SampledFamily: values must be finite");
}

Eigen::VectorXd uniform_samples(double lo, double hi, Eigen::Index n) {
  if (n < 1) throw DomainError("uniform_samples: need at least one sample");
  if (n == 1) return Eigen::VectorXd::Constant(1, lo);
  Eigen::VectorXd s(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (Eigen::Index k = 0; k < n; ++k) s(k) = lo + static_cast<double>(k) * step;
  s(n - 1) = hi;
  return s;
}

}  // namespace slag

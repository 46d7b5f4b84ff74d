#include "osp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace osp {

BoxSet::BoxSet(Vec lower, Vec upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.empty() || lower_.size() != upper_.size())
    throw std::invalid_argument("box: bounds empty or size mismatch");
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i]) || lower_[i] > upper_[i])
      throw std::invalid_argument("box: bounds must be finite with lower <= upper");
  }
}

BoxSet BoxSet::symmetric(double half_width, std::size_t dim) {
  if (!(half_width > 0.0)) throw std::invalid_argument("box: half width must be positive");
  return BoxSet(Vec(dim, -half_width), Vec(dim, half_width));
}

Vec BoxSet::project(const Vec& p) const {
  if (p.size() != dim()) throw std::invalid_argument("project: dimension mismatch");
  Vec out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    out[i] = std::min(std::max(p[i], lower_[i]), upper_[i]);
  return out;
}

bool BoxSet::contains(const Vec& p, double slack) const {
  if (p.size() != dim()) return false;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] < lower_[i] - slack || p[i] > upper_[i] + slack) return false;
  return true;
}

bool BoxSet::contains_interior(const Vec& p) const {
  if (p.size() != dim()) return false;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (!(p[i] > lower_[i] && p[i] < upper_[i])) return false;
  return true;
}

double BoxSet::diameter() const {
  double s = 0.0;
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    const double d = upper_[i] - lower_[i];
    s += d * d;
  }
  return std::sqrt(s);
}

Vec BoxSet::sample(SplitMix64& rng) const {
  Vec out(dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = rng.uniform(lower_[i], upper_[i]);
  return out;
}

double coupling(const Vec& x, const Vec& anchor) {
  if (x.size() != anchor.size()) throw std::invalid_argument("coupling: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - anchor[i];
    s += d * d;
  }
  return 0.5 * s;
}

double SquareNormRegularizer::coupling(const Vec& x, const Vec& anchor) const {
  return osp::coupling(x, anchor);
}

Vec SquareNormRegularizer::anchor_gradient(const Vec& x) const { return x; }

}  // namespace osp

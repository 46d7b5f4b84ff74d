#include "osp/vec.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace osp {

double dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

double distance(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("distance: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

bool all_finite(const Vec& a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace osp

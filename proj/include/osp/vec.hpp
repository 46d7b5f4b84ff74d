#pragma once

#include <cstddef>
#include <vector>

namespace osp {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b);
double norm(const Vec& a);
double distance(const Vec& a, const Vec& b);
bool all_finite(const Vec& a);

// strategy profile of the two players for one round
struct StrategyPair {
  Vec x, y;
};

}  // namespace osp

#pragma once

#include <utility>
#include <vector>

#include "osp/geometry.hpp"
#include "osp/payoffs.hpp"
#include "osp/vec.hpp"

namespace osp {

// saddle-point placement rules for the payoff stream; the four numbered cases
// drift/oscillate/spiral per a fixed schedule, case4 reacts to the players
enum class EnvironmentKind { case1, case2, case3, case4, stationary, nereg_cancel, custom };

double z1(long t);  // ln(1 + t)
double z2(long t);  // ln ln(e + t)

struct EnvironmentSpec {
  EnvironmentKind kind = EnvironmentKind::stationary;
  BoxSet box_x = BoxSet::symmetric(4.0);
  BoxSet box_y = BoxSet::symmetric(4.0);
  double saddle_a = 1.0, saddle_b = 1.0;           // stationary kind only
  std::vector<std::pair<double, double>> saddles;  // custom kind, cycled per round

  static EnvironmentSpec make(EnvironmentKind kind);
  static EnvironmentSpec stationary_at(double a, double b);
  static EnvironmentSpec custom_cycle(std::vector<std::pair<double, double>> saddles);
};

class Environment {
 public:
  explicit Environment(EnvironmentSpec spec);

  const EnvironmentSpec& spec() const { return spec_; }
  const BoxSet& box_x() const { return spec_.box_x; }
  const BoxSet& box_y() const { return spec_.box_y; }

  // payoff revealed after the players commit last_pair in round t; oblivious
  // kinds ignore the pair
  PayoffPtr next_payoff(long t, const StrategyPair& last_pair) const;

  // per-round equilibrium value; zero for every shipped rule (the saddle
  // stays in the box and the payoff vanishes there)
  double nash_value(long t) const;

 private:
  EnvironmentSpec spec_;
};

}  // namespace osp

#include "osp/environments.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace osp {

double z1(long t) {
  if (t < 0) throw std::invalid_argument("z1: negative round");
  return std::log1p(static_cast<double>(t));
}

double z2(long t) {
  if (t < 0) throw std::invalid_argument("z2: negative round");
  return std::log(std::log(std::numbers::e + static_cast<double>(t)));
}

EnvironmentSpec EnvironmentSpec::make(EnvironmentKind kind) {
  EnvironmentSpec s;
  s.kind = kind;
  if (kind == EnvironmentKind::nereg_cancel) {
    s.box_x = BoxSet::symmetric(1.0);
    s.box_y = BoxSet::symmetric(1.0);
  }
  return s;
}

EnvironmentSpec EnvironmentSpec::stationary_at(double a, double b) {
  EnvironmentSpec s = make(EnvironmentKind::stationary);
  s.saddle_a = a;
  s.saddle_b = b;
  return s;
}

EnvironmentSpec EnvironmentSpec::custom_cycle(std::vector<std::pair<double, double>> saddles) {
  EnvironmentSpec s = make(EnvironmentKind::custom);
  s.saddles = std::move(saddles);
  return s;
}

Environment::Environment(EnvironmentSpec spec) : spec_(std::move(spec)) {
  if (spec_.box_x.dim() != 1 || spec_.box_y.dim() != 1)
    throw std::invalid_argument("environment: scalar boxes required");
  if (spec_.kind == EnvironmentKind::custom) {
    if (spec_.saddles.empty())
      throw std::invalid_argument("environment: custom rule needs at least one saddle");
    for (const auto& [a, b] : spec_.saddles)
      if (!spec_.box_x.contains_interior({a}) || !spec_.box_y.contains_interior({b}))
        throw std::invalid_argument("environment: custom saddle outside the boxes");
  }
  if (spec_.kind == EnvironmentKind::stationary &&
      (!spec_.box_x.contains_interior({spec_.saddle_a}) ||
       !spec_.box_y.contains_interior({spec_.saddle_b})))
    throw std::invalid_argument("environment: stationary saddle outside the boxes");
}

PayoffPtr Environment::next_payoff(long t, const StrategyPair& last_pair) const {
  if (t < 1) throw std::invalid_argument("environment: rounds start at 1");
  if (last_pair.x.size() != 1 || last_pair.y.size() != 1)
    throw std::invalid_argument("environment: scalar strategies required");
  const double px = last_pair.x[0], py = last_pair.y[0];
  const double pi = std::numbers::pi;
  double a = 0.0, b = 0.0;

  switch (spec_.kind) {
    case EnvironmentKind::case1: {
      const double r = z2(t), phase = z1(t);
      a = r * std::cos(phase);
      b = r * std::sin(phase);
      break;
    }
    case EnvironmentKind::case2: {
      const double r = z2(t), phase = pi * static_cast<double>(t) + r;
      a = r * std::cos(phase);
      b = r * std::sin(phase);
      break;
    }
    case EnvironmentKind::case3: {
      const double r = z2(t), phase = 2.0 * pi * static_cast<double>(t) / 3.0 + r;
      a = r * std::cos(phase);
      b = r * std::sin(phase);
      break;
    }
    case EnvironmentKind::case4: {
      // rotate the committed pair and push it onto the radius-sqrt(2) circle;
      // the origin has no argument, pinned to 0 to keep the rule total
      const double arg = (px == 0.0 && py == 0.0) ? 0.0 : std::atan2(py, px);
      const double phase = 8.0 * pi / 9.0 + arg;
      const double r = std::sqrt(2.0);
      a = r * std::cos(phase);
      b = r * std::sin(phase);
      break;
    }
    case EnvironmentKind::stationary:
      a = spec_.saddle_a;
      b = spec_.saddle_b;
      break;
    case EnvironmentKind::nereg_cancel: {
      // alternating displacement: even rounds shift x* one unit toward the
      // interior, odd rounds shift y*; the played coordinate is kept exactly
      const bool even = t % 2 == 0;
      if (even) {
        a = px < 0.0 ? px + 1.0 : px - 1.0;
        b = py;
      } else {
        a = px;
        b = py < 0.0 ? py + 1.0 : py - 1.0;
      }
      if (!spec_.box_x.contains({a}) || !spec_.box_y.contains({b}))
        throw std::runtime_error("environment: saddle escaped the box at round " +
                                 std::to_string(t));
      return std::make_shared<SeparableQuadratic>(a, b);
    }
    case EnvironmentKind::custom: {
      const auto& s = spec_.saddles[static_cast<std::size_t>((t - 1) %
                                                             static_cast<long>(spec_.saddles.size()))];
      a = s.first;
      b = s.second;
      break;
    }
  }

  if (!spec_.box_x.contains_interior({a}) || !spec_.box_y.contains_interior({b}))
    throw std::runtime_error("environment: saddle escaped the box at round " + std::to_string(t));
  return std::make_shared<QuadraticSaddle>(a, b);
}

double Environment::nash_value(long t) const {
  if (t < 1) throw std::invalid_argument("environment: rounds start at 1");
  return 0.0;
}

}  // namespace osp

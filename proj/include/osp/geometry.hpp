#pragma once

#include <cstddef>

#include "osp/prng.hpp"
#include "osp/vec.hpp"

namespace osp {

// axis-aligned box, the strategy set of one player
class BoxSet {
 public:
  BoxSet(Vec lower, Vec upper);
  static BoxSet symmetric(double half_width, std::size_t dim = 1);

  std::size_t dim() const { return lower_.size(); }
  const Vec& lower() const { return lower_; }
  const Vec& upper() const { return upper_; }

  Vec project(const Vec& p) const;  // euclidean projection = per-coordinate clamp
  bool contains(const Vec& p, double slack = 0.0) const;
  bool contains_interior(const Vec& p) const;  // strict inequalities
  double diameter() const;                     // ||upper - lower||
  Vec sample(SplitMix64& rng) const;           // uniform, coordinates drawn in order

 private:
  Vec lower_, upper_;
};

// mirror-map surface used by the proximal updates; only the squared-norm map
// ships, and the closed-form prox solvers elsewhere assume it
class Regularizer {
 public:
  virtual ~Regularizer() = default;
  virtual double coupling(const Vec& x, const Vec& anchor) const = 0;
  virtual Vec anchor_gradient(const Vec& x) const = 0;
  virtual double strong_convexity() const = 0;
  virtual double lipschitz(const BoxSet& box) const = 0;
};

class SquareNormRegularizer final : public Regularizer {
 public:
  double coupling(const Vec& x, const Vec& anchor) const override;
  Vec anchor_gradient(const Vec& x) const override;  // identity map
  double strong_convexity() const override { return 1.0; }
  double lipschitz(const BoxSet& box) const override { return box.diameter(); }
};

// squared-norm coupling 0.5*||x - anchor||^2, shorthand for the only shipped map
double coupling(const Vec& x, const Vec& anchor);

}  // namespace osp

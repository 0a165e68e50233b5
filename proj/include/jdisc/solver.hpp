#pragma once

#include <span>
#include <string>
#include <vector>

#include "jdisc/operator.hpp"

namespace jdisc {

struct NewtonConfig {
  int max_iter = 30;
  double tol = 1e-12;
  /// Initial step factor of the backtracking line search.
  double damping = 1.0;
  /// Trust radius around the start disc, in the Hoelder norm.
  double epsilon_ball = 1.0;
  HolderConfig holder;
};

void validate(const NewtonConfig& cfg);

struct NewtonResult {
  DiscMap disc;
  int iterations = 0;
  double residual = 0.0;  // sup |F~(g) - target|
  std::vector<double> trace;
};

/// Damped Newton for F~(g) = target, refreezing the linearization at every
/// iterate. Steps are halved until the residual decreases (down to 2^-20);
/// every accepted iterate must satisfy holder_norm(g - start) <= epsilon_ball.
NewtonResult invert_F(const CorrectedOperator& op, const DiscMap& target, const DiscMap& start,
                      const NewtonConfig& cfg);

struct DiscSolution {
  DiscMap disc;
  NewtonResult newton;
  double residual;  // residual(A, disc)
  CorrectedOperator op;
};

/// A J-holomorphic disc with holomorphic part h: F~(f) = h for the
/// correction built at start.
DiscSolution solve_disc(const BeltramiField& A, const DiscMap& h, const DiscMap& start,
                        const NewtonConfig& cfg, bool normalized = false,
                        const CorrectionOptions& correction = {});

struct FamilySample {
  double t;
  DiscMap disc;
  double residual;  // residual(A, disc)
  int iterations;
  // Normalized families only: |f_t(0) - f(0)| and |f_t'(0) - f'(0) - t V'(0)|
  // with ' the x-derivative.
  double pin_value_error = 0.0;
  double pin_slope_error = 0.0;
};

struct DiscFamily {
  DiscMap base;
  DiscMap field;
  bool normalized = false;
  double t_max = 0.0;
  std::vector<FamilySample> samples;  // sorted by t
  std::vector<std::string> notices;

  const FamilySample* find(double t) const;
};

/// f_t = F~^{-1}(F~(f) + t dF~(V)) around the operator's base disc f.
/// t values are processed outward from 0 with warm starts; t_max starts at
/// epsilon_ball / (2 C holder_norm(dF~(V))) and halves on Newton failure.
DiscFamily make_family(const CorrectedOperator& op, const DiscMap& V,
                       std::span<const double> t_values, const NewtonConfig& cfg);

/// Same for an operator built with the normalized transform; requires
/// V(0) = 0 and records the pinning errors.
DiscFamily make_family_normalized(const CorrectedOperator& op, const DiscMap& V,
                                  std::span<const double> t_values, const NewtonConfig& cfg);

}  // namespace jdisc

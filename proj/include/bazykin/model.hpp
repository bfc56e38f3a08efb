#pragma once

#include <string>

#include "bazykin/grid.hpp"

namespace bazykin {

/// Parameters of the competition system
///   -lap u = u (a - u - b v f(u,v))
///   -lap v = v (c - v - d u f(u,v))
/// with the saturating response f(u,v) = 1 / ((1 + alpha u)(1 + beta v)).
struct ModelParams {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double alpha = 0.0;
  double beta = 0.0;

  void validate() const;

  /// The species swap (u,v,a,c,b,d,alpha,beta) -> (v,u,c,a,d,b,beta,alpha).
  ModelParams swapped() const { return {c, d, a, b, beta, alpha}; }
};

/// Saturating interaction factor 1 / ((1 + alpha u)(1 + beta v)).
double bazykin_response(double u, double v, const ModelParams& p);

struct StateVector {
  ScalarField u;
  ScalarField v;

  StateVector swapped() const { return {v, u}; }
};

void require_same_grid(const StateVector& s);

enum class Classification {
  trivial,
  semi_trivial_u,
  semi_trivial_v,
  coexistence,
  // Discrete systems have sign-changing roots the model does not admit;
  // they are labeled here and excluded from solution sets.
  indefinite,
};

enum class Stability { stable, unstable, undetermined };

std::string to_string(Classification c);
std::string to_string(Stability s);

struct SolutionRecord {
  StateVector state;
  ModelParams params;
  double residual_norm = 0.0;
  Classification classification = Classification::trivial;
  Stability stability = Stability::undetermined;
};

/// Componentwise steady-state residual of the system on the interior nodes.
StateVector residual(const StateVector& state, const ModelParams& p);

double residual_norm_inf(const StateVector& state, const ModelParams& p);

/// Linearization of the residual at a state, as the 2x2 block operator
///   [ -lap - a + 2u + b v f/(1+alpha u)   b u f/(1+beta v)                  ]
///   [ d v f/(1+alpha u)                   -lap - c + 2v + d u f/(1+beta v)  ]
/// acting on stacked (du, dv).
LinearOperator jacobian(const StateVector& state, const ModelParams& p);

/// Relative positivity floor: a component counts as positive when its minimum
/// exceeds 1e-6 * max(1, its maximum).
double pos_tol(const ScalarField& w);

Classification classify(const StateVector& state);

}  // namespace bazykin

#pragma once

#include "bazykin/grid.hpp"

namespace bazykin {

/// Principal eigenvalue of -lap + q under zero Dirichlet data together with
/// its eigenfunction, positive at every interior node and normalized so that
/// the quadrature of phi^2 over the domain equals 1.
struct EigenPair {
  double lambda = 0.0;
  ScalarField phi;
};

/// Smallest eigenvalue and one-signed eigenfunction of -lap + q, computed by
/// inverse power iteration on the shifted operator -lap + q + sigma with
/// sigma = max(0, -min q) + 1.
EigenPair principal_eigenpair(const Grid& grid, const ScalarField& q);

/// Spectral radius of (M - lap)^{-1} (M - q) by power iteration.
/// Requires M >= max q + 1. The radius straddles 1 exactly as the principal
/// eigenvalue of -lap + q straddles 0.
double spectral_radius_indicator(const Grid& grid, const ScalarField& q, double M);

/// Shift policy for spectral-radius checks: max q + max(1, |lambda1 estimate|).
double radius_shift(const ScalarField& q, double lambda1_estimate);

}  // namespace bazykin

#pragma once

// Solver tolerances shared across modules. These are contract values: tests
// assert against them, so changing one here retunes the whole artifact.

namespace bazykin::tol {

// Nonlinear solves accept an iterate when the residual max-norm drops below this.
inline constexpr double newton = 1e-10;

// Inverse power iteration stops once successive Rayleigh quotients agree to this.
inline constexpr double rayleigh_diff = 1e-11;

// Eigenpair residual contract: ||(-lap + q) phi - lambda phi||_inf <= eig_residual * max(1, |lambda|).
inline constexpr double eig_residual = 1e-8;

// Spectral-radius power iteration stops when successive estimates agree to this.
inline constexpr double radius_diff = 1e-10;

// Quadrature normalization of eigenfunctions must hold to this.
inline constexpr double normalization = 1e-10;

// An eigenvalue real part within this band of zero gives an "undetermined" verdict.
inline constexpr double stability = 1e-7;

// Two states count as the same solution when their nodewise max difference is below this.
inline constexpr double distinct = 1e-6;

// Iteration caps.
inline constexpr int max_power_iter = 10000;
inline constexpr int max_newton_iter = 100;
inline constexpr int max_line_search = 30;

}  // namespace bazykin::tol

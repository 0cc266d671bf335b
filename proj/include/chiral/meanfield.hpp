#pragma once

#include <vector>

namespace chiral {

// Fermionized mean-field theory of the type-A ladder. A ladder of length L
// carries N = 2L spins; momenta live on the grid p = 2 pi n / L.

struct Dispersion {
  double e_plus = 0.0;
  double e_minus = 0.0;
};

/// E(p) = 8(1-a) - 4(1-2a) cos p +- 2 sqrt((4 l^2 + 1) sin^2 p + (1 + cos p)^2).
Dispersion dispersion(double lambda, double alpha, double p);

struct OccupiedMode {
  double p = 0.0;
  int branch = -1;  // +1 or -1
  double energy = 0.0;
};

struct MeanFieldSolution {
  double lambda = 0.0;
  int ladder_length = 0;  // L
  double alpha = 0.0;
  std::vector<OccupiedMode> occupied;
  double energy = 0.0;  // -2N + sum of occupied energies
  double energy_per_site = 0.0;
  double residual = 0.0;  // |alpha_out - alpha_in| at the reported point
  int iterations = 0;
  bool used_bisection = false;
};

/// Fraction of the 2L modes with strictly negative energy at `alpha`.
double occupation(double lambda, double alpha, int ladder_length);

/// Damped fixed-point iteration (mixing 0.5) from alpha = 0; if it has not
/// settled after `max_iterations`, bisection on the integer occupation count
/// returns the smallest fixed point. Throws std::invalid_argument for L < 2.
MeanFieldSolution solve_self_consistent(double lambda, int ladder_length,
                                        int max_iterations = 200);

/// Smallest lambda > 0 at which E_-(p; alpha = 0) dips below zero, from a
/// bisection on the minimum over a p grid of spacing `grid_step`.
double transition_point(double grid_step = 1e-4);

/// sqrt(5)/2, where the p^2 coefficient 5/2 - 2 lambda^2 of E_- changes sign.
double transition_point_closed_form();

struct SweepPoint {
  double lambda = 0.0;
  double energy_per_site = 0.0;
  double alpha = 0.0;
};

/// solve_self_consistent over a sorted grid. Throws on an unsorted grid.
std::vector<SweepPoint> energy_sweep(const std::vector<double>& lambdas, int ladder_length);

}  // namespace chiral

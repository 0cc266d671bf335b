#include "chiral/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace chiral {

namespace {

double momentum(int n, int ladder_length) {
  return 2.0 * std::numbers::pi * n / ladder_length;
}

int negative_count(double lambda, double alpha, int ladder_length) {
  int count = 0;
  for (int n = 0; n < ladder_length; ++n) {
    const auto e = dispersion(lambda, alpha, momentum(n, ladder_length));
    count += (e.e_plus < 0.0) + (e.e_minus < 0.0);
  }
  return count;
}

double min_lower_branch(double lambda, double step) {
  double lo = std::numeric_limits<double>::infinity();
  for (double p = step; p <= std::numbers::pi; p += step) {
    lo = std::min(lo, dispersion(lambda, 0.0, p).e_minus);
  }
  return lo;
}

}  // namespace

Dispersion dispersion(double lambda, double alpha, double p) {
  const double s = std::sin(p);
  const double c = std::cos(p);
  const double base = 8.0 * (1.0 - alpha) - 4.0 * (1.0 - 2.0 * alpha) * c;
  const double root = 2.0 * std::sqrt((4.0 * lambda * lambda + 1.0) * s * s + (1.0 + c) * (1.0 + c));
  return {base + root, base - root};
}

double occupation(double lambda, double alpha, int ladder_length) {
  return static_cast<double>(negative_count(lambda, alpha, ladder_length)) / (2.0 * ladder_length);
}

MeanFieldSolution solve_self_consistent(double lambda, int ladder_length, int max_iterations) {
  if (ladder_length < 2) throw std::invalid_argument("ladder length must be at least 2");
  if (!std::isfinite(lambda)) throw std::invalid_argument("lambda must be finite");
  const int n = 2 * ladder_length;
  MeanFieldSolution sol;
  sol.lambda = lambda;
  sol.ladder_length = ladder_length;

  // alpha is kept on the grid k / N, where the occupation also lives.
  int k = 0;
  bool settled = false;
  for (int it = 0; it < max_iterations; ++it) {
    sol.iterations = it + 1;
    const int out = negative_count(lambda, static_cast<double>(k) / n, ladder_length);
    if (out == k) {
      settled = true;
      break;
    }
    const int next = static_cast<int>(std::lround(0.5 * k + 0.5 * out));
    k = next == k ? out : next;
  }
  if (!settled) {
    // The count grows with alpha, so the smallest k with f(k) <= k is fixed.
    int lo = 0, hi = n;
    while (lo < hi) {
      const int mid = (lo + hi) / 2;
      if (negative_count(lambda, static_cast<double>(mid) / n, ladder_length) <= mid) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    k = lo;
    sol.used_bisection = true;
  }

  sol.alpha = static_cast<double>(k) / n;
  sol.energy = -2.0 * n;
  for (int m = 0; m < ladder_length; ++m) {
    const double p = momentum(m, ladder_length);
    const auto e = dispersion(lambda, sol.alpha, p);
    if (e.e_plus < 0.0) sol.occupied.push_back({p, +1, e.e_plus});
    if (e.e_minus < 0.0) sol.occupied.push_back({p, -1, e.e_minus});
  }
  for (const auto& o : sol.occupied) sol.energy += o.energy;
  sol.energy_per_site = sol.energy / n;
  sol.residual = std::abs(static_cast<double>(sol.occupied.size()) / n - sol.alpha);
  return sol;
}

double transition_point(double grid_step) {
  if (!(grid_step > 0.0)) throw std::invalid_argument("grid step must be positive");
  double lo = 0.0, hi = 4.0;
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    if (min_lower_branch(mid, grid_step) < 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double transition_point_closed_form() { return 0.5 * std::sqrt(5.0); }

std::vector<SweepPoint> energy_sweep(const std::vector<double>& lambdas, int ladder_length) {
  if (!std::is_sorted(lambdas.begin(), lambdas.end())) {
    throw std::invalid_argument("lambda grid must be sorted");
  }
  if (ladder_length < 2) throw std::invalid_argument("ladder length must be at least 2");
  for (double l : lambdas) {
    if (!std::isfinite(l)) throw std::invalid_argument("lambda must be finite");
  }
  std::vector<SweepPoint> out(lambdas.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const auto sol = solve_self_consistent(lambdas[i], ladder_length);
    out[i] = {sol.lambda, sol.energy_per_site, sol.alpha};
  }
  return out;
}

}  // namespace chiral

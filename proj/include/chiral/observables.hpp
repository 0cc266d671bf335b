#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "chiral/eigensolver.hpp"
#include "chiral/lattice.hpp"
#include "chiral/terms.hpp"

namespace chiral {

/// O|psi> for the operator described by `table`; stays in the sector.
Eigen::VectorXcd apply_table(const SectorState& state, const CouplingTable& table);

/// <psi|O|psi>; the imaginary part is returned for reality checks.
cplx expectation(const SectorState& state, const CouplingTable& table);

/// <psi| sigma_a . (sigma_b x sigma_c) |psi> in the stored vertex order.
/// The plaquette's sign is not applied.
double chirality_expectation(const SectorState& state, const Plaquette& plaquette);

/// Largest |eigenvalue| of the oriented total chirality restricted to the
/// ground manifold, divided by the number of plaquettes.
double mean_chirality(const GroundManifold& manifold, const LatticeSpec& spec);

struct SpinVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// <sigma_i>. The transverse components couple neighbouring sectors only and
/// are returned as exact zeros for a single-sector state.
SpinVector polarization(const SectorState& state, int site);

/// <sigma_i . sigma_j> - <sigma_i>.<sigma_j>; C(i, i) = 3 - |<sigma_i>|^2.
double spin_correlator(const SectorState& state, int i, int j);

/// <X_a X_b> - <X_a><X_b> with both operators in stored vertex order.
double chiral_correlator(const SectorState& state, const Plaquette& a, const Plaquette& b);

/// <d> with d = (1 - sigma_i.sigma_j) / 4, the singlet projector on a bond.
double dimer_expectation(const SectorState& state, const Bond& bond);

/// (<d_b d_ref> - <d_b><d_ref>) / (<d_ref>(1 - <d_b>)); empty when the
/// denominator vanishes.
std::optional<double> dimer_correlator(const SectorState& state, const Bond& reference,
                                       const Bond& bond);

struct TotalSpin {
  double s = 0.0;       // nearest half-integer root of S(S+1) = s2_raw
  double s2_raw = 0.0;  // <S_tot^2>, S_tot = sum sigma / 2
  bool is_eigenstate = false;
};

/// Throws nothing; `is_eigenstate` is false when S(S+1) misses s2_raw by
/// more than `tol` or the state has a nonzero S^2 variance.
TotalSpin total_spin(const SectorState& state, double tol = 1e-6);

/// S_z of a sector in units of hbar.
inline double sector_sz(int n_sites, int n_up) { return n_up - 0.5 * n_sites; }

struct ManifoldLevel {
  int n_up = 0;
  TotalSpin spin;
  SectorState state;
};

/// Ground vectors re-diagonalized with S^2 inside each sector block, so that
/// each returned state carries a definite total spin.
std::vector<ManifoldLevel> spin_resolved_manifold(const GroundManifold& manifold);

/// Translation of a sector state on a torus by (drow, dcol) sites.
Eigen::VectorXcd translate(const SectorState& state, const LatticeSpec& spec, int drow, int dcol);

struct Momentum {
  int n_up = 0;
  double k_row = 0.0;
  double k_col = 0.0;
  bool snapped = false;  // both angles within 1e-6 of 0 or pi
};

/// Joint eigenvalue phases of the unit translations along rows and columns,
/// diagonalized inside each sector block of the manifold. Throws
/// std::invalid_argument for non-torus lattices.
std::vector<Momentum> momentum_numbers(const GroundManifold& manifold, const LatticeSpec& spec);

/// A single state standing in for the manifold: the smallest-n_up sector
/// block, rotated to the eigenvector of the oriented total chirality with the
/// largest |eigenvalue| (first such on ties).
SectorState representative_state(const GroundManifold& manifold, const LatticeSpec& spec);

/// Periodic distance min(d, n - d) between two site labels on a quasi-1D chain.
int ring_distance(int i, int j, int n);

/// Minimum-image Euclidean distance between grid points on a torus.
double torus_distance(const LatticeSpec& spec, double row_a, double col_a, double row_b,
                      double col_b);

/// Distance between centroids of two bonds, plaquettes or sites (given as
/// site lists). Uses ring distance of the first sites for quasi-1D lattices.
double object_distance(const LatticeSpec& spec, const std::vector<int>& a,
                       const std::vector<int>& b);

}  // namespace chiral

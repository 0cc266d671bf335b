#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "chiral/hamiltonian.hpp"
#include "chiral/hilbert.hpp"
#include "chiral/lattice.hpp"

namespace chiral {

struct Eigenpair {
  double value = 0.0;
  Eigen::VectorXcd vector;
  double residual = 0.0;  // ||H v - value v||
};

struct SolverOptions {
  int k = 6;
  /// Relative residual target: ||Hv - Ev|| <= tol * max(1, |E|).
  double tol = 1e-10;
  /// Krylov subspace size per restart cycle.
  int krylov_dim = 60;
  int max_restarts = 400;
  /// Sectors up to this dimension are diagonalized densely.
  std::size_t dense_threshold = 600;
  std::uint64_t seed = 20080613;
};

struct SolveResult {
  std::vector<Eigenpair> pairs;  // ascending
  bool converged = true;
  double worst_residual = 0.0;
  int matvecs = 0;
};

/// Lowest `options.k` eigenpairs of a Hermitian operator. Dense solve below
/// the threshold, otherwise restarted Lanczos with full reorthogonalization
/// and locking of converged vectors.
SolveResult lowest_eigenpairs(const LinearOperator& op, const SolverOptions& options = {});

/// Always dense; used as the reference route and for small sectors.
SolveResult dense_lowest_eigenpairs(const LinearOperator& op, int k);

/// Always iterative, regardless of dimension.
SolveResult lanczos_lowest_eigenpairs(const LinearOperator& op, const SolverOptions& options);

/// One normalized state living in a single magnetization sector.
struct SectorState {
  std::shared_ptr<const SectorBasis> basis;
  Eigen::VectorXcd amplitudes;

  int n_up() const { return basis->n_up(); }
  int n_sites() const { return basis->n_sites(); }
};

struct SectorSpectrum {
  int n_up = 0;
  std::vector<double> values;  // lowest eigenvalues, ascending
  bool converged = true;
};

/// Ground-state manifold aggregated over the scanned sectors
/// n_up = 0 .. floor(N/2). Sectors n_up > N/2 are the spin-flipped images
/// of scanned ones and only enter through their multiplicity.
struct GroundManifold {
  double e0 = 0.0;
  /// Eigenvectors at e0 from the scanned sectors, orthonormal per sector.
  std::vector<SectorState> vectors;
  /// Number of states within tol_deg of e0, mirrored sectors included.
  int degeneracy = 0;
  /// First level above the manifold minus e0; NaN when not resolved.
  double gap = 0.0;
  double tol_deg = 0.0;
  std::vector<SectorSpectrum> per_sector;
  bool converged = true;
  int n_sites = 0;

  /// 2 for sectors with a distinct spin-flipped partner, 1 for n_up = N/2.
  int mirror_multiplicity(int n_up) const { return 2 * n_up == n_sites ? 1 : 2; }
};

struct ManifoldOptions {
  int k_per_sector = 6;
  /// Negative selects the default 1e-8 * max(1, |e0|).
  double tol_deg = -1.0;
  SolverOptions solver{};
  AssemblyOptions assembly{};
};

GroundManifold ground_manifold(const LatticeSpec& spec, double lambda,
                               const ManifoldOptions& options = {});

}  // namespace chiral

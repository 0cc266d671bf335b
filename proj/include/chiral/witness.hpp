#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "chiral/eigensolver.hpp"
#include "chiral/terms.hpp"

namespace chiral {

using Matrix8cd = Eigen::Matrix<cplx, 8, 8>;
using Vector8cd = Eigen::Matrix<cplx, 8, 1>;

// Three-spin index convention: bit t of the 0..7 index is spin t of the
// triple (t = 0 is the first site), bit set = up. |up up up> is index 7.

/// Validated three-spin density matrix.
class ThreeSpinDensity {
 public:
  /// Throws std::invalid_argument unless rho is Hermitian, has unit trace and
  /// no eigenvalue below -tol.
  explicit ThreeSpinDensity(const Matrix8cd& rho, double tol = 1e-10);

  /// Normalizes the vector; throws on a zero vector.
  static ThreeSpinDensity pure(const Vector8cd& psi);

  const Matrix8cd& matrix() const noexcept { return rho_; }

 private:
  Matrix8cd rho_;
};

/// Dense sigma_1 . (sigma_2 x sigma_3) on three spins.
Matrix8cd chirality_matrix();

struct ChiralityEigenspace {
  double value = 0.0;
  int multiplicity = 0;
  Eigen::Matrix<cplx, 8, Eigen::Dynamic> vectors;
};

/// Eigenspaces of chirality_matrix() in ascending eigenvalue order.
std::vector<ChiralityEigenspace> chirality_eigensystem();

/// tr(rho X).
double chi(const ThreeSpinDensity& rho);

/// Reduced density of sites (i, j, k) in that order. Throws
/// std::invalid_argument on repeated or out-of-range indices.
ThreeSpinDensity reduced_density(const SectorState& state, int i, int j, int k);

/// Correlation tensor T_abc = tr(rho sigma_a x sigma_b x sigma_c), a,b,c in {x,y,z}.
std::array<double, 27> correlation_tensor(const ThreeSpinDensity& rho);

enum class EntanglementClass { SeparableConsistent, Entangled, GenuineTripartite, BeyondGhzBound };

std::string_view to_string(EntanglementClass c);

/// Minimal class consistent with a maximized chirality.
EntanglementClass classify(double chi_max, double tol = 1e-6);

struct WitnessOptions {
  int restarts = 50;
  std::uint64_t seed = 20080613;
  int max_evaluations = 4000;  // per simplex run
};

struct WitnessResult {
  double chi_raw = 0.0;
  double chi_max = 0.0;
  double e_x = 0.0;
  /// ZYZ Euler angles (alpha, beta, gamma) for each of the three sites.
  std::array<double, 9> angles{};
  EntanglementClass entanglement_class = EntanglementClass::SeparableConsistent;
};

/// Chirality maximized over local unitaries U1 x U2 x U3.
///
/// Local unitaries act on the correlation tensor through SO(3) rotations, so
/// |tr(rho U^dag X U)| = |sum T_abc det[R1 e_a, R2 e_b, R3 e_c]|; the search is
/// a multi-start Nelder-Mead over the nine Euler angles, the first start
/// being the identity.
WitnessResult witness_ex(const ThreeSpinDensity& rho, const WitnessOptions& options = {});

/// Chirality after rotating each site by the given ZYZ angles.
double rotated_chi(const std::array<double, 27>& tensor, const std::array<double, 9>& angles);

}  // namespace chiral

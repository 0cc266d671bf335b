#include "chiral/witness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace chiral {

namespace {

using Mat3 = Eigen::Matrix3d;
using Pauli = Eigen::Matrix2cd;

// Single-spin index 1 = up.
std::array<Pauli, 3> paulis() {
  Pauli x, y, z;
  x << 0, 1, 1, 0;
  y << 0, cplx{0, 1}, cplx{0, -1}, 0;  // <down|y|up> = i
  z << -1, 0, 0, 1;
  return {x, y, z};
}

// A x B x C with A on bit 0, B on bit 1, C on bit 2.
Matrix8cd kron3(const Pauli& a, const Pauli& b, const Pauli& c) {
  Matrix8cd m;
  for (int t = 0; t < 8; ++t) {
    for (int s = 0; s < 8; ++s) {
      m(t, s) = a(t & 1, s & 1) * b((t >> 1) & 1, (s >> 1) & 1) * c((t >> 2) & 1, (s >> 2) & 1);
    }
  }
  return m;
}

Mat3 zyz(double a, double b, double g) {
  return (Eigen::AngleAxisd(a, Eigen::Vector3d::UnitZ()) *
          Eigen::AngleAxisd(b, Eigen::Vector3d::UnitY()) *
          Eigen::AngleAxisd(g, Eigen::Vector3d::UnitZ()))
      .toRotationMatrix();
}

using Point = std::array<double, 9>;

// Minimizes f by Nelder-Mead from x0 with initial step `step`.
template <class F>
std::pair<Point, double> nelder_mead(F&& f, const Point& x0, double step, int max_evals) {
  constexpr int n = 9;
  std::array<Point, n + 1> simplex;
  std::array<double, n + 1> val;
  simplex[0] = x0;
  for (int i = 0; i < n; ++i) {
    simplex[i + 1] = x0;
    simplex[i + 1][i] += step;
  }
  int evals = 0;
  for (int i = 0; i <= n; ++i) {
    val[i] = f(simplex[i]);
    ++evals;
  }
  std::array<int, n + 1> order;
  while (evals < max_evals) {
    for (int i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return val[a] < val[b]; });
    const int best = order[0], worst = order[n], second = order[n - 1];
    if (val[worst] - val[best] < 1e-14) {
      double size = 0.0;
      for (int i = 0; i <= n; ++i) {
        for (int d = 0; d < n; ++d) size = std::max(size, std::abs(simplex[i][d] - simplex[best][d]));
      }
      if (size < 1e-9) break;
    }
    Point centroid{};
    for (int i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (int d = 0; d < n; ++d) centroid[d] += simplex[i][d] / n;
    }
    auto along = [&](double t) {
      Point p;
      for (int d = 0; d < n; ++d) p[d] = centroid[d] + t * (simplex[worst][d] - centroid[d]);
      return p;
    };
    const Point xr = along(-1.0);
    const double fr = f(xr);
    ++evals;
    if (fr < val[best]) {
      const Point xe = along(-2.0);
      const double fe = f(xe);
      ++evals;
      if (fe < fr) {
        simplex[worst] = xe;
        val[worst] = fe;
      } else {
        simplex[worst] = xr;
        val[worst] = fr;
      }
      continue;
    }
    if (fr < val[second]) {
      simplex[worst] = xr;
      val[worst] = fr;
      continue;
    }
    const bool outside = fr < val[worst];
    const Point xc = along(outside ? -0.5 : 0.5);
    const double fc = f(xc);
    ++evals;
    if (fc < (outside ? fr : val[worst])) {
      simplex[worst] = xc;
      val[worst] = fc;
      continue;
    }
    for (int i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (int d = 0; d < n; ++d) simplex[i][d] = simplex[best][d] + 0.5 * (simplex[i][d] - simplex[best][d]);
      val[i] = f(simplex[i]);
      ++evals;
    }
  }
  const int best = static_cast<int>(std::min_element(val.begin(), val.end()) - val.begin());
  return {simplex[best], val[best]};
}

}  // namespace

ThreeSpinDensity::ThreeSpinDensity(const Matrix8cd& rho, double tol) : rho_(rho) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) {
    throw std::invalid_argument("density matrix is not Hermitian");
  }
  if (std::abs(rho.trace() - cplx{1.0, 0.0}) > tol) {
    throw std::invalid_argument("density matrix trace differs from 1");
  }
  rho_ = (rho + rho.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix8cd> es(rho_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) {
    throw std::invalid_argument("density matrix has a negative eigenvalue");
  }
}

ThreeSpinDensity ThreeSpinDensity::pure(const Vector8cd& psi) {
  const double nrm = psi.norm();
  if (nrm == 0.0) throw std::invalid_argument("zero state vector");
  const Vector8cd v = psi / nrm;
  return ThreeSpinDensity(v * v.adjoint());
}

Matrix8cd chirality_matrix() {
  Matrix8cd m = Matrix8cd::Zero();
  for (BasisState s = 0; s < 8; ++s) {
    chiral_terms(0, 1, 2, s, [&](BasisState t, cplx amp) { m(t, s) += amp; });
  }
  return m;
}

std::vector<ChiralityEigenspace> chirality_eigensystem() {
  Eigen::SelfAdjointEigenSolver<Matrix8cd> es(chirality_matrix());
  std::vector<ChiralityEigenspace> out;
  for (int c = 0; c < 8;) {
    int end = c + 1;
    while (end < 8 && std::abs(es.eigenvalues()[end] - es.eigenvalues()[c]) < 1e-9) ++end;
    ChiralityEigenspace space;
    space.value = es.eigenvalues().segment(c, end - c).mean();
    space.multiplicity = end - c;
    space.vectors = es.eigenvectors().middleCols(c, end - c);
    out.push_back(std::move(space));
    c = end;
  }
  return out;
}

double chi(const ThreeSpinDensity& rho) {
  return (rho.matrix() * chirality_matrix()).trace().real();
}

ThreeSpinDensity reduced_density(const SectorState& state, int i, int j, int k) {
  const int n = state.n_sites();
  for (int s : {i, j, k}) {
    if (s < 0 || s >= n) throw std::invalid_argument("triple index out of range");
  }
  if (i == j || j == k || i == k) throw std::invalid_argument("triple indices must differ");
  const BasisState mask = (BasisState{1} << i) | (BasisState{1} << j) | (BasisState{1} << k);
  const auto& basis = *state.basis;
  std::unordered_map<BasisState, Vector8cd> env;
  env.reserve(basis.size() / 2 + 1);
  for (std::size_t r = 0; r < basis.size(); ++r) {
    const BasisState s = basis.state(r);
    const int local = static_cast<int>(((s >> i) & 1U) | (((s >> j) & 1U) << 1) | (((s >> k) & 1U) << 2));
    auto [it, inserted] = env.try_emplace(s & ~mask, Vector8cd::Zero());
    it->second[local] = state.amplitudes[static_cast<Eigen::Index>(r)];
  }
  Matrix8cd rho = Matrix8cd::Zero();
  for (const auto& [e, v] : env) rho.noalias() += v * v.adjoint();
  rho /= rho.trace().real();
  return ThreeSpinDensity(rho, 1e-9);
}

std::array<double, 27> correlation_tensor(const ThreeSpinDensity& rho) {
  const auto p = paulis();
  std::array<double, 27> t{};
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      for (int c = 0; c < 3; ++c) {
        t[9 * a + 3 * b + c] = (rho.matrix() * kron3(p[a], p[b], p[c])).trace().real();
      }
    }
  }
  return t;
}

double rotated_chi(const std::array<double, 27>& tensor, const std::array<double, 9>& angles) {
  const Mat3 r1 = zyz(angles[0], angles[1], angles[2]);
  const Mat3 r2 = zyz(angles[3], angles[4], angles[5]);
  const Mat3 r3 = zyz(angles[6], angles[7], angles[8]);
  double acc = 0.0;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      const Eigen::Vector3d cross = r1.col(a).cross(r2.col(b));
      for (int c = 0; c < 3; ++c) {
        const double t = tensor[9 * a + 3 * b + c];
        if (t != 0.0) acc += t * cross.dot(r3.col(c));
      }
    }
  }
  return acc;
}

std::string_view to_string(EntanglementClass c) {
  switch (c) {
    case EntanglementClass::SeparableConsistent: return "separable-consistent";
    case EntanglementClass::Entangled: return "entangled";
    case EntanglementClass::GenuineTripartite: return "genuine-tripartite";
    case EntanglementClass::BeyondGhzBound: return "beyond-ghz-bound";
  }
  return "unknown";
}

EntanglementClass classify(double chi_max, double tol) {
  if (chi_max <= 1.0 + tol) return EntanglementClass::SeparableConsistent;
  if (chi_max <= 2.0 + tol) return EntanglementClass::Entangled;
  if (chi_max <= 1.5 * std::sqrt(3.0) + tol) return EntanglementClass::GenuineTripartite;
  return EntanglementClass::BeyondGhzBound;
}

WitnessResult witness_ex(const ThreeSpinDensity& rho, const WitnessOptions& options) {
  if (options.restarts < 1) throw std::invalid_argument("witness needs at least one start");
  const auto tensor = correlation_tensor(rho);
  const auto objective = [&](const Point& x) { return -std::abs(rotated_chi(tensor, x)); };

  WitnessResult out;
  out.chi_raw = chi(rho);
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  double best = -std::abs(out.chi_raw);
  Point best_x{};
  for (int run = 0; run < options.restarts; ++run) {
    Point x0{};
    if (run > 0) {
      for (double& a : x0) a = angle(rng);
    }
    auto [x, v] = nelder_mead(objective, x0, 0.5, options.max_evaluations);
    // Polish from the end point with a small simplex.
    auto [xp, vp] = nelder_mead(objective, x, 1e-3, options.max_evaluations);
    if (vp < v) {
      x = xp;
      v = vp;
    }
    if (v < best - 1e-15) {
      best = v;
      best_x = x;
    }
  }
  out.chi_max = -best;
  out.angles = best_x;
  out.e_x = out.chi_max - 1.0;
  out.entanglement_class = classify(out.chi_max);
  return out;
}

}  // namespace chiral

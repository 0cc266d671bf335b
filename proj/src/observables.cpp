#include "chiral/observables.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace chiral {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

std::span<const cplx> view(const VectorXcd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

std::span<cplx> view(VectorXcd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

double sigma_z(const SectorState& state, int site) {
  const auto& basis = *state.basis;
  double acc = 0.0;
  for (std::size_t r = 0; r < basis.size(); ++r) {
    const double w = std::norm(state.amplitudes[static_cast<Eigen::Index>(r)]);
    acc += ((basis.state(r) >> site) & 1U) ? w : -w;
  }
  return acc;
}

CouplingTable total_spin_squared_pairs(int n) {
  CouplingTable t;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) t.pairs.push_back({i, j, 0.5});
  }
  return t;
}

// S^2 |psi> = (3N/4) |psi> + (1/2) sum_{i<j} sigma_i.sigma_j |psi>.
VectorXcd apply_s2(const SectorState& state) {
  const int n = state.n_sites();
  VectorXcd out = apply_table(state, total_spin_squared_pairs(n));
  out += (0.75 * n) * state.amplitudes;
  return out;
}

// Groups manifold vectors by sector, preserving order.
std::map<int, std::vector<const SectorState*>> by_sector(const GroundManifold& manifold) {
  std::map<int, std::vector<const SectorState*>> groups;
  for (const auto& v : manifold.vectors) groups[v.n_up()].push_back(&v);
  return groups;
}

// <v_a|O|v_b> for one sector block, given O v_b for every b.
MatrixXcd block_matrix(const std::vector<const SectorState*>& vs,
                       const std::vector<VectorXcd>& applied) {
  const auto d = static_cast<Eigen::Index>(vs.size());
  MatrixXcd m(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) m(a, b) = vs[a]->amplitudes.dot(applied[b]);
  }
  return m;
}

SectorState combine(const std::vector<const SectorState*>& vs, const VectorXcd& coeffs) {
  VectorXcd v = VectorXcd::Zero(vs.front()->amplitudes.size());
  for (std::size_t a = 0; a < vs.size(); ++a) {
    v += coeffs[static_cast<Eigen::Index>(a)] * vs[a]->amplitudes;
  }
  v.normalize();
  return {vs.front()->basis, std::move(v)};
}

double snap_angle(double a, bool& snapped) {
  if (std::abs(a) < 1e-6) return 0.0;
  if (std::abs(std::abs(a) - std::numbers::pi) < 1e-6) return std::numbers::pi;
  snapped = false;
  return a;
}

}  // namespace

VectorXcd apply_table(const SectorState& state, const CouplingTable& table) {
  VectorXcd out(state.amplitudes.size());
  term_matvec(*state.basis, table, view(state.amplitudes), view(out));
  return out;
}

cplx expectation(const SectorState& state, const CouplingTable& table) {
  return state.amplitudes.dot(apply_table(state, table));
}

double chirality_expectation(const SectorState& state, const Plaquette& plaquette) {
  return expectation(state, CouplingTable::single_plaquette(plaquette)).real();
}

double mean_chirality(const GroundManifold& manifold, const LatticeSpec& spec) {
  if (spec.plaquettes().empty() || manifold.vectors.empty()) return 0.0;
  const auto xt = CouplingTable::total_chirality(spec);
  double best = 0.0;
  for (const auto& [n_up, vs] : by_sector(manifold)) {
    std::vector<VectorXcd> applied;
    for (const auto* v : vs) applied.push_back(apply_table(*v, xt));
    MatrixXcd m = block_matrix(vs, applied);
    m = (m + m.adjoint()).eval() * 0.5;
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    best = std::max(best, es.eigenvalues().cwiseAbs().maxCoeff());
  }
  return best / static_cast<double>(spec.plaquettes().size());
}

SpinVector polarization(const SectorState& state, int site) {
  if (site < 0 || site >= state.n_sites()) throw std::out_of_range("site index");
  // sigma^x and sigma^y change n_up by one, so <psi|sigma^{x,y}|psi> pairs
  // amplitudes of different sectors; a single-sector state has none.
  return {0.0, 0.0, sigma_z(state, site)};
}

double spin_correlator(const SectorState& state, int i, int j) {
  const SpinVector a = polarization(state, i);
  const SpinVector b = polarization(state, j);
  const double ss = i == j ? 3.0 : expectation(state, CouplingTable::single_pair(i, j)).real();
  return ss - (a.x * b.x + a.y * b.y + a.z * b.z);
}

double chiral_correlator(const SectorState& state, const Plaquette& a, const Plaquette& b) {
  const VectorXcd xa = apply_table(state, CouplingTable::single_plaquette(a));
  const VectorXcd xb = apply_table(state, CouplingTable::single_plaquette(b));
  const double ab = xa.dot(xb).real();
  return ab - state.amplitudes.dot(xa).real() * state.amplitudes.dot(xb).real();
}

namespace {

VectorXcd apply_dimer(const SectorState& state, const Bond& bond) {
  VectorXcd out = apply_table(state, CouplingTable::single_pair(bond.i, bond.j));
  return (state.amplitudes - out) * 0.25;
}

}  // namespace

double dimer_expectation(const SectorState& state, const Bond& bond) {
  return state.amplitudes.dot(apply_dimer(state, bond)).real();
}

std::optional<double> dimer_correlator(const SectorState& state, const Bond& reference,
                                       const Bond& bond) {
  const VectorXcd dr = apply_dimer(state, reference);
  const VectorXcd db = apply_dimer(state, bond);
  const double er = state.amplitudes.dot(dr).real();
  const double eb = state.amplitudes.dot(db).real();
  const double denom = er * (1.0 - eb);
  if (std::abs(er) < 1e-12 || std::abs(1.0 - eb) < 1e-12) return std::nullopt;
  return (db.dot(dr).real() - eb * er) / denom;
}

TotalSpin total_spin(const SectorState& state, double tol) {
  const VectorXcd s2v = apply_s2(state);
  TotalSpin out;
  out.s2_raw = state.amplitudes.dot(s2v).real();
  const double root = 0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * std::max(0.0, out.s2_raw)));
  out.s = 0.5 * std::round(2.0 * root);
  const double spread = (s2v - out.s2_raw * state.amplitudes).norm();
  out.is_eigenstate = std::abs(out.s * (out.s + 1.0) - out.s2_raw) <= tol && spread <= tol;
  return out;
}

std::vector<ManifoldLevel> spin_resolved_manifold(const GroundManifold& manifold) {
  std::vector<ManifoldLevel> out;
  for (const auto& [n_up, vs] : by_sector(manifold)) {
    std::vector<VectorXcd> applied;
    for (const auto* v : vs) applied.push_back(apply_s2(*v));
    MatrixXcd m = block_matrix(vs, applied);
    m = (m + m.adjoint()).eval() * 0.5;
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m);
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      SectorState st = combine(vs, es.eigenvectors().col(c));
      TotalSpin ts = total_spin(st);
      out.push_back({n_up, ts, std::move(st)});
    }
  }
  return out;
}

VectorXcd translate(const SectorState& state, const LatticeSpec& spec, int drow, int dcol) {
  if (!spec.is_torus()) throw std::invalid_argument("translations need a torus lattice");
  const int rows = spec.geometry().rows;
  const int cols = spec.geometry().cols;
  std::vector<int> image(static_cast<std::size_t>(rows * cols));
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      image[static_cast<std::size_t>(r * cols + c)] = spec.torus_site(r + drow, c + dcol);
    }
  }
  const auto& basis = *state.basis;
  VectorXcd out = VectorXcd::Zero(state.amplitudes.size());
  for (std::size_t r = 0; r < basis.size(); ++r) {
    BasisState s = basis.state(r);
    BasisState t = 0;
    while (s != 0) {
      const int p = std::countr_zero(s);
      t |= BasisState{1} << image[static_cast<std::size_t>(p)];
      s &= s - 1;
    }
    out[static_cast<Eigen::Index>(basis.rank_unchecked(t))] =
        state.amplitudes[static_cast<Eigen::Index>(r)];
  }
  return out;
}

std::vector<Momentum> momentum_numbers(const GroundManifold& manifold, const LatticeSpec& spec) {
  if (!spec.is_torus()) throw std::invalid_argument("momentum needs a torus lattice");
  std::vector<Momentum> out;
  const double gamma = 0.5 * (std::sqrt(5.0) - 1.0);
  for (const auto& [n_up, vs] : by_sector(manifold)) {
    std::vector<VectorXcd> tr, tc;
    for (const auto* v : vs) {
      tr.push_back(translate(*v, spec, 1, 0));
      tc.push_back(translate(*v, spec, 0, 1));
    }
    const MatrixXcd a = block_matrix(vs, tr);
    const MatrixXcd b = block_matrix(vs, tc);
    Eigen::ComplexEigenSolver<MatrixXcd> es(a + gamma * b);
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      const VectorXcd y = es.eigenvectors().col(c).normalized();
      Momentum m;
      m.n_up = n_up;
      m.snapped = true;
      m.k_row = snap_angle(std::arg(y.dot(a * y)), m.snapped);
      m.k_col = snap_angle(std::arg(y.dot(b * y)), m.snapped);
      out.push_back(m);
    }
  }
  return out;
}

SectorState representative_state(const GroundManifold& manifold, const LatticeSpec& spec) {
  if (manifold.vectors.empty()) throw std::invalid_argument("empty ground manifold");
  const auto groups = by_sector(manifold);
  const auto& vs = groups.begin()->second;
  if (vs.size() == 1 || spec.plaquettes().empty()) return *vs.front();
  const auto xt = CouplingTable::total_chirality(spec);
  std::vector<VectorXcd> applied;
  for (const auto* v : vs) applied.push_back(apply_table(*v, xt));
  MatrixXcd m = block_matrix(vs, applied);
  m = (m + m.adjoint()).eval() * 0.5;
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m);
  Eigen::Index pick = 0;
  for (Eigen::Index c = 1; c < m.cols(); ++c) {
    if (std::abs(es.eigenvalues()[c]) > std::abs(es.eigenvalues()[pick]) + 1e-9) pick = c;
  }
  return combine(vs, es.eigenvectors().col(pick));
}

int ring_distance(int i, int j, int n) {
  const int d = std::abs(i - j) % n;
  return std::min(d, n - d);
}

double torus_distance(const LatticeSpec& spec, double row_a, double col_a, double row_b,
                      double col_b) {
  const double rows = spec.geometry().rows;
  const double cols = spec.geometry().cols;
  double dr = std::fmod(std::abs(row_a - row_b), rows);
  double dc = std::fmod(std::abs(col_a - col_b), cols);
  dr = std::min(dr, rows - dr);
  dc = std::min(dc, cols - dc);
  return std::hypot(dr, dc);
}

double object_distance(const LatticeSpec& spec, const std::vector<int>& a,
                       const std::vector<int>& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("empty site list");
  if (!spec.is_torus()) {
    return ring_distance(*std::min_element(a.begin(), a.end()),
                         *std::min_element(b.begin(), b.end()), spec.n_sites());
  }
  const int rows = spec.geometry().rows;
  const int cols = spec.geometry().cols;
  // Unwrap every vertex next to the first one, then average.
  auto centroid = [&](const std::vector<int>& s) {
    const double r0 = s.front() / cols;
    const double c0 = s.front() % cols;
    double rs = 0.0, cs = 0.0;
    for (int site : s) {
      double r = site / cols, c = site % cols;
      if (r - r0 > 0.5 * rows) r -= rows;
      if (r0 - r > 0.5 * rows) r += rows;
      if (c - c0 > 0.5 * cols) c -= cols;
      if (c0 - c > 0.5 * cols) c += cols;
      rs += r;
      cs += c;
    }
    return std::pair{rs / static_cast<double>(s.size()), cs / static_cast<double>(s.size())};
  };
  const auto [ra, ca] = centroid(a);
  const auto [rb, cb] = centroid(b);
  return torus_distance(spec, ra, ca, rb, cb);
}

}  // namespace chiral

#include "chiral/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace chiral {

namespace {

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;


VectorXcd random_vector(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  VectorXcd v(n);
  for (Index i = 0; i < n; ++i) v[i] = cplx{g(rng), g(rng)};
  return v;
}

// Rayleigh-Ritz over an orthonormal set, then explicit residuals.
SolveResult finalize(const LinearOperator& op, const MatrixXcd& basis, bool converged,
                     int matvecs) {
  SolveResult out;
  out.converged = converged;
  const Index k = basis.cols();
  MatrixXcd hb(basis.rows(), k);
  for (Index c = 0; c < k; ++c) hb.col(c) = op.apply(VectorXcd(basis.col(c)));
  out.matvecs = matvecs + static_cast<int>(k);
  MatrixXcd proj = basis.adjoint() * hb;
  proj = (proj + proj.adjoint()).eval() * 0.5;
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(proj);
  for (Index c = 0; c < k; ++c) {
    Eigenpair p;
    p.value = es.eigenvalues()[c];
    p.vector = basis * es.eigenvectors().col(c);
    const VectorXcd hv = hb * es.eigenvectors().col(c);
    p.residual = (hv - p.value * p.vector).norm();
    out.worst_residual = std::max(out.worst_residual, p.residual);
    out.pairs.push_back(std::move(p));
  }
  return out;
}

// Restarted block Lanczos with full (twice repeated) Gram-Schmidt, thick
// restart on the lowest Ritz vectors, and locking of converged pairs.
//
// Invariant: columns [0, processed) of `basis` have had the operator applied;
// coeff(i, j) = <v_i|H|v_j> for every j < processed and every stored i.
// Columns [processed, size) form the frontier.
class BlockLanczos {
 public:
  BlockLanczos(const LinearOperator& op, const SolverOptions& opt)
      : op_(op), opt_(opt), n_(static_cast<Index>(op.dim())), rng_(opt.seed) {
    k_ = static_cast<int>(std::min<Index>(opt.k, n_));
    block_ = static_cast<int>(std::min<Index>(n_, std::max(2, std::min(k_, 4))));
    Index m = std::max<Index>(opt.krylov_dim, 2 * k_ + 3 * block_ + 4);
    // Keep the basis within ~1 GiB.
    const Index cap = std::max<Index>(2 * k_ + 3 * block_ + 4,
                                      static_cast<Index>((Index{1} << 30) / (16 * std::max<Index>(n_, 1))));
    mmax_ = std::min({m, cap, n_});
    basis_.resize(n_, mmax_);
    coeff_ = MatrixXcd::Zero(mmax_, mmax_);
    locked_.resize(n_, 0);
  }

  SolveResult run() {
    if (k_ <= 0) return {};
    seed_frontier(block_);
    bool converged = false;
    for (int cycle = 0; cycle <= opt_.max_restarts; ++cycle) {
      expand();
      if (rayleigh_ritz_and_lock()) {
        converged = true;
        break;
      }
      if (cycle == opt_.max_restarts) break;
      restart();
    }
    if (!converged) lock_best_remaining();
    return finalize(op_, locked_, converged, matvecs_);
  }

 private:
  // Orthogonalizes w against locked vectors and basis columns [0, size_).
  // Accumulates the basis coefficients into `coef` and returns ||w||.
  double orthogonalize(VectorXcd& w, VectorXcd* coef) {
    for (int pass = 0; pass < 2; ++pass) {
      if (locked_.cols() > 0) w -= locked_ * (locked_.adjoint() * w);
      if (size_ > 0) {
        const VectorXcd c = basis_.leftCols(size_).adjoint() * w;
        w -= basis_.leftCols(size_) * c;
        if (coef) *coef += c;
      }
    }
    return w.norm();
  }

  void seed_frontier(int count) {
    for (int added = 0, tries = 0; added < count && size_ < mmax_ && tries < 4 * count; ++tries) {
      VectorXcd w = random_vector(n_, rng_);
      const double before = w.norm();
      const double nrm = orthogonalize(w, nullptr);
      if (nrm <= 1e-10 * before) continue;
      basis_.col(size_++) = w / nrm;
      ++added;
    }
  }

  void expand() {
    // Once the basis spans the whole space the remaining columns are still
    // applied; their images have nowhere new to go.
    while (processed_ < size_ && (size_ < mmax_ || mmax_ == n_)) {
      const Index j = processed_;
      VectorXcd w = op_.apply(VectorXcd(basis_.col(j)));
      ++matvecs_;
      const double scale = w.norm();
      VectorXcd coef = VectorXcd::Zero(size_);
      const double beta = orthogonalize(w, &coef);
      coeff_.col(j).head(size_) = coef;
      ++processed_;
      if (size_ < mmax_ && beta > 1e-12 * std::max(scale, 1.0)) {
        basis_.col(size_) = w / beta;
        coeff_(size_, j) = beta;
        ++size_;
      }
      if (processed_ == size_ && size_ < mmax_) {
        // Invariant subspace; continue from a fresh direction if any is left.
        seed_frontier(1);
      }
    }
  }

  bool rayleigh_ritz_and_lock() {
    const Index p = processed_;
    MatrixXcd h = coeff_.topLeftCorner(p, p);
    h = (h + h.adjoint()).eval() * 0.5;
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
    theta_ = es.eigenvalues();
    ritz_ = es.eigenvectors();
    const Index frontier = size_ - p;
    frontier_coeff_ = frontier > 0 ? MatrixXcd(coeff_.block(p, 0, frontier, p) * ritz_)
                                   : MatrixXcd(0, p);

    newly_locked_ = 0;
    const int need = k_ - static_cast<int>(locked_.cols());
    for (Index i = 0; i < p && newly_locked_ < need; ++i) {
      const double res = frontier > 0 ? frontier_coeff_.col(i).norm() : 0.0;
      if (res > opt_.tol * std::max(1.0, std::abs(theta_[i]))) break;
      append_locked(basis_.leftCols(p) * ritz_.col(i));
      ++newly_locked_;
    }
    return static_cast<int>(locked_.cols()) >= k_;
  }

  void restart() {
    const Index p = processed_;
    const Index frontier = size_ - p;
    const Index available = p - newly_locked_;
    const int need = k_ - static_cast<int>(locked_.cols());
    Index keep = std::max<Index>(need + block_, (mmax_ - frontier) / 2);
    keep = std::min({keep, available, mmax_ - frontier - 1});
    keep = std::max<Index>(keep, 0);

    MatrixXcd next(n_, keep + frontier);
    next.leftCols(keep) = basis_.leftCols(p) * ritz_.middleCols(newly_locked_, keep);
    if (frontier > 0) next.rightCols(frontier) = basis_.middleCols(p, frontier);

    coeff_.setZero();
    for (Index i = 0; i < keep; ++i) coeff_(i, i) = theta_[newly_locked_ + i];
    if (frontier > 0) {
      coeff_.block(keep, 0, frontier, keep) = frontier_coeff_.middleCols(newly_locked_, keep);
    }
    basis_.leftCols(keep + frontier) = next;
    processed_ = keep;
    size_ = keep + frontier;
    if (frontier == 0) seed_frontier(block_);
  }

  void append_locked(const VectorXcd& v) {
    VectorXcd w = v;
    // Reorthogonalize against earlier locked vectors only.
    for (int pass = 0; pass < 2; ++pass) {
      if (locked_.cols() > 0) w -= locked_ * (locked_.adjoint() * w);
    }
    w.normalize();
    locked_.conservativeResize(Eigen::NoChange, locked_.cols() + 1);
    locked_.col(locked_.cols() - 1) = w;
  }

  void lock_best_remaining() {
    const Index p = processed_;
    for (Index i = newly_locked_; i < p && locked_.cols() < k_; ++i) {
      append_locked(basis_.leftCols(p) * ritz_.col(i));
    }
  }

  const LinearOperator& op_;
  SolverOptions opt_;
  Index n_;
  int k_ = 0;
  int block_ = 1;
  Index mmax_ = 0;
  std::mt19937_64 rng_;
  MatrixXcd basis_;
  MatrixXcd coeff_;
  MatrixXcd locked_;
  Index size_ = 0;
  Index processed_ = 0;
  Eigen::VectorXd theta_;
  MatrixXcd ritz_;
  MatrixXcd frontier_coeff_;
  Index newly_locked_ = 0;
  int matvecs_ = 0;
};

}  // namespace

SolveResult dense_lowest_eigenpairs(const LinearOperator& op, int k) {
  const auto n = static_cast<Index>(op.dim());
  const Index kk = std::min<Index>(k, n);
  const MatrixXcd dense = op.to_dense();
  const MatrixXcd herm = (dense + dense.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(herm);
  if (es.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed");
  SolveResult out;
  out.matvecs = static_cast<int>(n);
  for (Index c = 0; c < kk; ++c) {
    Eigenpair p;
    p.value = es.eigenvalues()[c];
    p.vector = es.eigenvectors().col(c);
    p.residual = (dense * p.vector - p.value * p.vector).norm();
    out.worst_residual = std::max(out.worst_residual, p.residual);
    out.pairs.push_back(std::move(p));
  }
  return out;
}

SolveResult lanczos_lowest_eigenpairs(const LinearOperator& op, const SolverOptions& options) {
  if (options.k < 0) throw std::invalid_argument("k must be non-negative");
  if (op.dim() == 0) throw std::invalid_argument("empty operator");
  return BlockLanczos(op, options).run();
}

SolveResult lowest_eigenpairs(const LinearOperator& op, const SolverOptions& options) {
  if (options.k < 0) throw std::invalid_argument("k must be non-negative");
  if (static_cast<std::size_t>(options.k) > op.dim()) {
    throw std::invalid_argument("k exceeds the operator dimension");
  }
  if (op.dim() <= options.dense_threshold) return dense_lowest_eigenpairs(op, options.k);
  return lanczos_lowest_eigenpairs(op, options);
}

GroundManifold ground_manifold(const LatticeSpec& spec, double lambda,
                               const ManifoldOptions& options) {
  const int n = spec.n_sites();
  struct SectorSolve {
    std::shared_ptr<const SectorBasis> basis;
    SolveResult result;
  };
  std::vector<SectorSolve> solves;

  auto solve_sector = [&](int n_up, int k) {
    auto basis = std::make_shared<const SectorBasis>(n, n_up);
    const auto h = assemble({spec, lambda, n_up}, basis, options.assembly);
    SolverOptions so = options.solver;
    so.k = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(k), basis->size()));
    so.seed = options.solver.seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(n_up + 1);
    return SectorSolve{basis, lowest_eigenpairs(h, so)};
  };

  for (int n_up = 0; 2 * n_up <= n; ++n_up) solves.push_back(solve_sector(n_up, options.k_per_sector));

  auto lowest = [&] {
    double e = std::numeric_limits<double>::infinity();
    for (const auto& s : solves) e = std::min(e, s.result.pairs.front().value);
    return e;
  };
  double e0 = lowest();
  double tol = options.tol_deg >= 0.0 ? options.tol_deg : 1e-8 * std::max(1.0, std::abs(e0));

  // A sector whose every computed level sits in the manifold may hide more.
  for (auto& s : solves) {
    int k = static_cast<int>(s.result.pairs.size());
    while (static_cast<std::size_t>(k) < s.basis->size() &&
           s.result.pairs.back().value <= e0 + tol) {
      k = static_cast<int>(std::min<std::size_t>(2 * static_cast<std::size_t>(k), s.basis->size()));
      s = solve_sector(s.basis->n_up(), k);
    }
  }
  e0 = lowest();
  if (options.tol_deg < 0.0) tol = 1e-8 * std::max(1.0, std::abs(e0));

  GroundManifold gm;
  gm.n_sites = n;
  gm.e0 = e0;
  gm.tol_deg = tol;
  double first_excited = std::numeric_limits<double>::infinity();
  for (const auto& s : solves) {
    SectorSpectrum spectrum{s.basis->n_up(), {}, s.result.converged};
    gm.converged = gm.converged && s.result.converged;
    for (const auto& pair : s.result.pairs) {
      spectrum.values.push_back(pair.value);
      if (pair.value <= e0 + tol) {
        gm.vectors.push_back({s.basis, pair.vector});
        gm.degeneracy += gm.mirror_multiplicity(s.basis->n_up());
      } else {
        first_excited = std::min(first_excited, pair.value);
      }
    }
    gm.per_sector.push_back(std::move(spectrum));
  }
  gm.gap = std::isfinite(first_excited) ? first_excited - e0
                                        : std::numeric_limits<double>::quiet_NaN();
  return gm;
}

}  // namespace chiral

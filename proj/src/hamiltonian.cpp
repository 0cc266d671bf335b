#include "chiral/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace chiral {

std::vector<Term> heisenberg_apply(const Bond& bond, BasisState s) {
  std::vector<Term> out;
  exchange_terms(bond.i, bond.j, s, [&](BasisState t, cplx a) { out.push_back({t, a}); });
  return out;
}

std::vector<Term> chiral_apply(const Plaquette& p, BasisState s) {
  std::vector<Term> out;
  chiral_terms(p.sites[0], p.sites[1], p.sites[2], s,
               [&](BasisState t, cplx a) { out.push_back({t, a}); });
  return out;
}

CouplingTable CouplingTable::hamiltonian(const LatticeSpec& spec, double lambda) {
  if (!std::isfinite(lambda)) throw std::invalid_argument("lambda must be finite");
  CouplingTable t;
  for (const auto& b : spec.bonds()) t.pairs.push_back({b.i, b.j, -static_cast<double>(b.sign)});
  if (lambda != 0.0) {
    for (const auto& p : spec.plaquettes()) {
      t.triples.push_back({p.sites[0], p.sites[1], p.sites[2], lambda * p.sign});
    }
  }
  return t;
}

CouplingTable CouplingTable::total_chirality(const LatticeSpec& spec) {
  CouplingTable t;
  for (const auto& p : spec.plaquettes()) {
    t.triples.push_back({p.sites[0], p.sites[1], p.sites[2], static_cast<double>(p.sign)});
  }
  return t;
}

CouplingTable CouplingTable::single_plaquette(const Plaquette& p) {
  CouplingTable t;
  t.triples.push_back({p.sites[0], p.sites[1], p.sites[2], 1.0});
  return t;
}

CouplingTable CouplingTable::single_pair(int i, int j) {
  CouplingTable t;
  t.pairs.push_back({i, j, 1.0});
  return t;
}

Eigen::VectorXcd LinearOperator::apply(const Eigen::VectorXcd& x) const {
  Eigen::VectorXcd y(static_cast<Eigen::Index>(dim()));
  apply(std::span<const cplx>(x.data(), static_cast<std::size_t>(x.size())),
        std::span<cplx>(y.data(), static_cast<std::size_t>(y.size())));
  return y;
}

Eigen::MatrixXcd LinearOperator::to_dense() const {
  const auto n = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXcd m(n, n);
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
  for (Eigen::Index c = 0; c < n; ++c) {
    e[c] = 1.0;
    m.col(c) = apply(e);
    e[c] = 0.0;
  }
  return m;
}

SparseOperator::SparseOperator(CsrMatrix matrix, bool hermitian)
    : matrix_(std::move(matrix)), hermitian_(hermitian) {}

void SparseOperator::apply(std::span<const cplx> x, std::span<cplx> y) const {
  csr_matvec(matrix_, x, y);
}

void SparseOperator::apply_serial(std::span<const cplx> x, std::span<cplx> y) const {
  csr_matvec_serial(matrix_, x, y);
}

MatrixFreeOperator::MatrixFreeOperator(std::shared_ptr<const SectorBasis> basis,
                                       CouplingTable table)
    : basis_(std::move(basis)), table_(std::move(table)) {
  if (!basis_) throw std::invalid_argument("matrix-free operator needs a basis");
}

void MatrixFreeOperator::apply(std::span<const cplx> x, std::span<cplx> y) const {
  term_matvec(*basis_, table_, x, y);
}

void MatrixFreeOperator::apply_serial(std::span<const cplx> x, std::span<cplx> y) const {
  term_matvec_serial(*basis_, table_, x, y);
}

SectorHamiltonian::SectorHamiltonian(std::shared_ptr<const SectorBasis> basis,
                                     std::variant<SparseOperator, MatrixFreeOperator> impl)
    : basis_(std::move(basis)), impl_(std::move(impl)) {}

void SectorHamiltonian::apply(std::span<const cplx> x, std::span<cplx> y) const {
  std::visit([&](const auto& op) { op.apply(x, y); }, impl_);
}

SectorHamiltonian assemble(const AssemblyRequest& request, const AssemblyOptions& options) {
  auto basis = std::make_shared<const SectorBasis>(request.spec.n_sites(), request.n_up);
  return assemble(request, std::move(basis), options);
}

SectorHamiltonian assemble(const AssemblyRequest& request,
                           std::shared_ptr<const SectorBasis> basis,
                           const AssemblyOptions& options) {
  if (!basis || basis->n_sites() != request.spec.n_sites() || basis->n_up() != request.n_up) {
    throw std::invalid_argument("basis does not match the assembly request");
  }
  auto table = CouplingTable::hamiltonian(request.spec, request.lambda);
  const std::size_t row_bound = 1 + table.pairs.size() + 3 * table.triples.size();
  bool stream = options.force_matrix_free;
  if (!stream && basis->size() * row_bound > options.max_nonzeros) {
    stream = count_csr_nonzeros(*basis, table) > options.max_nonzeros;
  }
  if (stream) {
    MatrixFreeOperator op(basis, std::move(table));
    return SectorHamiltonian(std::move(basis), std::move(op));
  }
  SparseOperator op(assemble_csr(*basis, table), true);
  return SectorHamiltonian(std::move(basis), std::move(op));
}

}  // namespace chiral

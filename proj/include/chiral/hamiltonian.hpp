#pragma once

#include <memory>
#include <span>
#include <variant>

#include <Eigen/Dense>

#include "chiral/hilbert.hpp"
#include "chiral/kernels.hpp"
#include "chiral/lattice.hpp"
#include "chiral/terms.hpp"

namespace chiral {

/// Hermitian linear map on one S_z sector.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual std::size_t dim() const = 0;
  virtual void apply(std::span<const cplx> x, std::span<cplx> y) const = 0;

  Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;
  /// Dense matrix built column by column from apply().
  Eigen::MatrixXcd to_dense() const;
};

/// Explicitly stored sector operator.
class SparseOperator final : public LinearOperator {
 public:
  SparseOperator(CsrMatrix matrix, bool hermitian = true);

  std::size_t dim() const override { return matrix_.dim; }
  void apply(std::span<const cplx> x, std::span<cplx> y) const override;
  using LinearOperator::apply;
  void apply_serial(std::span<const cplx> x, std::span<cplx> y) const;

  const CsrMatrix& matrix() const noexcept { return matrix_; }
  bool hermitian() const noexcept { return hermitian_; }
  std::size_t nnz() const noexcept { return matrix_.nnz(); }

 private:
  CsrMatrix matrix_;
  bool hermitian_;
};

/// Sector operator whose matrix elements are generated on every apply().
class MatrixFreeOperator final : public LinearOperator {
 public:
  MatrixFreeOperator(std::shared_ptr<const SectorBasis> basis, CouplingTable table);

  std::size_t dim() const override { return basis_->size(); }
  void apply(std::span<const cplx> x, std::span<cplx> y) const override;
  using LinearOperator::apply;
  void apply_serial(std::span<const cplx> x, std::span<cplx> y) const;

  const SectorBasis& basis() const noexcept { return *basis_; }
  const CouplingTable& table() const noexcept { return table_; }

 private:
  std::shared_ptr<const SectorBasis> basis_;
  CouplingTable table_;
};

struct AssemblyRequest {
  const LatticeSpec& spec;
  double lambda = 0.0;
  int n_up = 0;
};

struct AssemblyOptions {
  /// Above this many stored entries the operator streams its terms instead.
  std::size_t max_nonzeros = std::size_t{1} << 26;
  bool force_matrix_free = false;
};

/// H restricted to one magnetization sector, stored or matrix-free.
class SectorHamiltonian final : public LinearOperator {
 public:
  SectorHamiltonian(std::shared_ptr<const SectorBasis> basis,
                    std::variant<SparseOperator, MatrixFreeOperator> impl);

  std::size_t dim() const override { return basis_->size(); }
  void apply(std::span<const cplx> x, std::span<cplx> y) const override;
  using LinearOperator::apply;

  const std::shared_ptr<const SectorBasis>& basis() const noexcept { return basis_; }
  bool matrix_free() const noexcept {
    return std::holds_alternative<MatrixFreeOperator>(impl_);
  }
  /// Null when matrix-free.
  const SparseOperator* sparse() const noexcept { return std::get_if<SparseOperator>(&impl_); }

 private:
  std::shared_ptr<const SectorBasis> basis_;
  std::variant<SparseOperator, MatrixFreeOperator> impl_;
};

/// -sum J sigma.sigma + lambda sum X chirality on sector n_up.
SectorHamiltonian assemble(const AssemblyRequest& request, const AssemblyOptions& options = {});
SectorHamiltonian assemble(const AssemblyRequest& request,
                           std::shared_ptr<const SectorBasis> basis,
                           const AssemblyOptions& options = {});

}  // namespace chiral

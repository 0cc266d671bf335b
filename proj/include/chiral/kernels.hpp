#pragma once

// Sector matvec kernels. Each kernel has an OpenMP version (rows partitioned
// across threads, one thread per output row) and a serial reference used by
// the tests and the benchmark. Both sum each row in the same order, so their
// results are bitwise identical.

#include <cstdint>
#include <span>
#include <vector>

#include "chiral/hilbert.hpp"
#include "chiral/terms.hpp"

namespace chiral {

/// Compressed sparse rows with 32-bit column indices.
struct CsrMatrix {
  std::size_t dim = 0;
  std::vector<std::size_t> row_ptr;  // dim + 1 entries
  std::vector<std::uint32_t> col;
  std::vector<cplx> val;

  std::size_t nnz() const noexcept { return col.size(); }
};

void csr_matvec(const CsrMatrix& a, std::span<const cplx> x, std::span<cplx> y);
void csr_matvec_serial(const CsrMatrix& a, std::span<const cplx> x, std::span<cplx> y);

/// y = O x for the Hermitian operator described by `table`, generating the
/// matrix elements on the fly: y[r] = sum_t conj(<t|O|r>) x[t].
void term_matvec(const SectorBasis& basis, const CouplingTable& table,
                 std::span<const cplx> x, std::span<cplx> y);
void term_matvec_serial(const SectorBasis& basis, const CouplingTable& table,
                        std::span<const cplx> x, std::span<cplx> y);

/// Row-by-row CSR assembly of the same operator. Duplicate columns within a
/// row are merged and exact zeros dropped. Throws std::logic_error if any
/// generated state leaves the sector.
CsrMatrix assemble_csr(const SectorBasis& basis, const CouplingTable& table);

/// Number of stored entries assemble_csr would produce.
std::size_t count_csr_nonzeros(const SectorBasis& basis, const CouplingTable& table);

}  // namespace chiral

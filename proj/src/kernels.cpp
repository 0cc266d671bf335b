#include "chiral/kernels.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace chiral {

namespace {

void check_sizes(std::size_t dim, std::span<const cplx> x, std::span<cplx> y) {
  if (x.size() != dim || y.size() != dim) {
    throw std::invalid_argument("matvec size mismatch: operator dim " + std::to_string(dim) +
                                ", x " + std::to_string(x.size()) + ", y " +
                                std::to_string(y.size()));
  }
}

inline cplx csr_row(const CsrMatrix& a, std::size_t r, const cplx* x) {
  cplx acc{0.0, 0.0};
  for (std::size_t p = a.row_ptr[r]; p < a.row_ptr[r + 1]; ++p) acc += a.val[p] * x[a.col[p]];
  return acc;
}

inline cplx term_row(const SectorBasis& basis, const CouplingTable& table, std::size_t r,
                     const cplx* x) {
  cplx acc{0.0, 0.0};
  for_each_term(table, basis.state(r), [&](BasisState t, cplx amp) {
    acc += std::conj(amp) * x[basis.rank_unchecked(t)];
  });
  return acc;
}

// Collects one row's entries, merged by column.
struct RowBuffer {
  std::vector<std::pair<std::uint32_t, cplx>> entries;

  // Returns false if a generated state left the sector; such terms are skipped.
  bool fill(const SectorBasis& basis, const CouplingTable& table, std::size_t r) {
    entries.clear();
    const int n_up = basis.n_up();
    bool in_sector = true;
    for_each_term(table, basis.state(r), [&](BasisState t, cplx amp) {
      if (std::popcount(t) != n_up) {
        in_sector = false;
        return;
      }
      entries.emplace_back(static_cast<std::uint32_t>(basis.rank_unchecked(t)), std::conj(amp));
    });
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::size_t out = 0;
    for (std::size_t in = 0; in < entries.size();) {
      auto col = entries[in].first;
      cplx sum{0.0, 0.0};
      for (; in < entries.size() && entries[in].first == col; ++in) sum += entries[in].second;
      if (sum != cplx{0.0, 0.0}) entries[out++] = {col, sum};
    }
    entries.resize(out);
    return in_sector;
  }
};

void throw_if_leaked(bool leaked) {
  if (leaked) throw std::logic_error("operator term left the S_z sector");
}

}  // namespace

void csr_matvec(const CsrMatrix& a, std::span<const cplx> x, std::span<cplx> y) {
  check_sizes(a.dim, x, y);
  const auto n = static_cast<std::int64_t>(a.dim);
  const cplx* xp = x.data();
  cplx* yp = y.data();
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < n; ++r) yp[r] = csr_row(a, static_cast<std::size_t>(r), xp);
}

void csr_matvec_serial(const CsrMatrix& a, std::span<const cplx> x, std::span<cplx> y) {
  check_sizes(a.dim, x, y);
  for (std::size_t r = 0; r < a.dim; ++r) y[r] = csr_row(a, r, x.data());
}

void term_matvec(const SectorBasis& basis, const CouplingTable& table,
                 std::span<const cplx> x, std::span<cplx> y) {
  check_sizes(basis.size(), x, y);
  const auto n = static_cast<std::int64_t>(basis.size());
  const cplx* xp = x.data();
  cplx* yp = y.data();
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < n; ++r) {
    yp[r] = term_row(basis, table, static_cast<std::size_t>(r), xp);
  }
}

void term_matvec_serial(const SectorBasis& basis, const CouplingTable& table,
                        std::span<const cplx> x, std::span<cplx> y) {
  check_sizes(basis.size(), x, y);
  for (std::size_t r = 0; r < basis.size(); ++r) y[r] = term_row(basis, table, r, x.data());
}

std::size_t count_csr_nonzeros(const SectorBasis& basis, const CouplingTable& table) {
  const auto n = static_cast<std::int64_t>(basis.size());
  std::size_t total = 0;
  bool leaked = false;
#pragma omp parallel reduction(+ : total) reduction(|| : leaked)
  {
    RowBuffer buf;
#pragma omp for schedule(static)
    for (std::int64_t r = 0; r < n; ++r) {
      if (!buf.fill(basis, table, static_cast<std::size_t>(r))) leaked = true;
      total += buf.entries.size();
    }
  }
  throw_if_leaked(leaked);
  return total;
}

CsrMatrix assemble_csr(const SectorBasis& basis, const CouplingTable& table) {
  CsrMatrix a;
  a.dim = basis.size();
  const auto n = static_cast<std::int64_t>(a.dim);
  a.row_ptr.assign(a.dim + 1, 0);

  // Pass 1: row lengths. Pass 2: fill. Rows are independent in both.
  bool leaked = false;
#pragma omp parallel reduction(|| : leaked)
  {
    RowBuffer buf;
#pragma omp for schedule(static)
    for (std::int64_t r = 0; r < n; ++r) {
      if (!buf.fill(basis, table, static_cast<std::size_t>(r))) leaked = true;
      a.row_ptr[static_cast<std::size_t>(r) + 1] = buf.entries.size();
    }
  }
  throw_if_leaked(leaked);
  for (std::size_t r = 0; r < a.dim; ++r) a.row_ptr[r + 1] += a.row_ptr[r];
  a.col.resize(a.row_ptr.back());
  a.val.resize(a.row_ptr.back());
#pragma omp parallel
  {
    RowBuffer buf;
#pragma omp for schedule(static)
    for (std::int64_t r = 0; r < n; ++r) {
      const auto row = static_cast<std::size_t>(r);
      buf.fill(basis, table, row);
      std::size_t p = a.row_ptr[row];
      for (const auto& [c, v] : buf.entries) {
        a.col[p] = c;
        a.val[p] = v;
        ++p;
      }
    }
  }
  return a;
}

}  // namespace chiral

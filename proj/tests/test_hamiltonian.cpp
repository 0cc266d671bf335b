#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "chiral/hamiltonian.hpp"
#include "oracle.hpp"

using namespace chiral;

namespace {

const double kSqrt3 = std::sqrt(3.0);

Eigen::VectorXd sorted(Eigen::VectorXd v) {
  std::sort(v.data(), v.data() + v.size());
  return v;
}

std::vector<LatticeSpec> small_lattices() {
  return {build_ladder_a(6, true), build_ladder_a(10, true), build_ladder_a(7, false),
          build_ladder_b(8, true), build_ladder_b(9, true), build_ladder_c(9),
          build_ring(8),           build_ring(9),           build_torus(2, 4),
          build_torus(3, 3)};
}

}  // namespace

TEST_CASE("exchange term amplitudes") {
  const auto aligned = heisenberg_apply({0, 1, 1}, 0b11);
  REQUIRE(aligned.size() == 1);
  CHECK(aligned[0].state == 0b11u);
  CHECK(aligned[0].amplitude == cplx{1, 0});

  // |up down>: site 0 up, site 1 down.
  const auto mixed = heisenberg_apply({0, 1, 1}, 0b01);
  REQUIRE(mixed.size() == 2);
  CHECK(mixed[0].state == 0b01u);
  CHECK(mixed[0].amplitude == cplx{-1, 0});
  CHECK(mixed[1].state == 0b10u);
  CHECK(mixed[1].amplitude == cplx{2, 0});

  const auto ev = oracle::eigenvalues(oracle::sigma_dot(2, 0, 1));
  CHECK(ev[0] == doctest::Approx(-3));
  for (int i = 1; i < 4; ++i) CHECK(ev[i] == doctest::Approx(1));
}

TEST_CASE("chiral term matches the Levi-Civita oracle") {
  CHECK(chiral_apply({{0, 1, 2}, 1}, 0b111).empty());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(8, 8);
  for (BasisState s = 0; s < 8; ++s) {
    for (const auto& t : chiral_apply({{0, 1, 2}, 1}, s)) m(t.state, s) += t.amplitude;
  }
  CHECK((m - oracle::chirality(3, 0, 1, 2)).cwiseAbs().maxCoeff() < 1e-14);
  // Any site order, on a larger register.
  for (auto [i, j, k] : {std::array{0, 2, 4}, std::array{3, 1, 0}, std::array{4, 0, 2}}) {
    Eigen::MatrixXcd big = Eigen::MatrixXcd::Zero(32, 32);
    for (BasisState s = 0; s < 32; ++s) {
      for (const auto& t : chiral_apply({{i, j, k}, 1}, s)) big(t.state, s) += t.amplitude;
    }
    CHECK((big - oracle::chirality(5, i, j, k)).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("chirality spectrum and square identity") {
  const auto x = oracle::chirality(3, 0, 1, 2);
  const auto ev = oracle::eigenvalues(x);
  for (int i = 0; i < 2; ++i) CHECK(ev[i] == doctest::Approx(-2 * kSqrt3).epsilon(1e-12));
  for (int i = 2; i < 6; ++i) CHECK(std::abs(ev[i]) < 1e-12);
  for (int i = 6; i < 8; ++i) CHECK(ev[i] == doctest::Approx(2 * kSqrt3).epsilon(1e-12));
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(8, 8);
  for (int a = 0; a < 3; ++a) {
    Eigen::MatrixXcd sa = Eigen::MatrixXcd::Zero(8, 8);
    for (int i = 0; i < 3; ++i) sa += oracle::pauli_string(3, {{a, i}});
    s += sa * sa;
  }
  const Eigen::MatrixXcd rhs = -s + 15.0 * Eigen::MatrixXcd::Identity(8, 8);
  CHECK((x * x - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("single triangle spectrum in closed form") {
  const auto spec = build_ladder_c(3);
  const auto h0 = assemble({spec, 0.0, 3});
  CHECK(h0.dim() == 1);
  CHECK(h0.to_dense()(0, 0).real() == doctest::Approx(-3.0));
  for (double lambda : {0.0, 0.7, 2.0, -1.3}) {
    std::vector<double> all;
    for (int n_up = 0; n_up <= 3; ++n_up) {
      const auto ev = oracle::eigenvalues(assemble({spec, lambda, n_up}).to_dense());
      all.insert(all.end(), ev.data(), ev.data() + ev.size());
    }
    std::sort(all.begin(), all.end());
    std::vector<double> want{-3, -3, -3, -3, 3 - 2 * kSqrt3 * lambda, 3 - 2 * kSqrt3 * lambda,
                             3 + 2 * kSqrt3 * lambda, 3 + 2 * kSqrt3 * lambda};
    std::sort(want.begin(), want.end());
    for (std::size_t i = 0; i < 8; ++i) CHECK(all[i] == doctest::Approx(want[i]).epsilon(1e-12));
  }
}

TEST_CASE("sector blocks equal the dense Pauli construction") {
  for (const auto& spec : small_lattices()) {
    const int n = spec.n_sites();
    const double lambda = 0.83;
    const auto full = oracle::hamiltonian(spec, lambda);
    CHECK((full - full.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
    for (int n_up = 0; n_up <= n; ++n_up) {
      const auto h = assemble({spec, lambda, n_up});
      const Eigen::MatrixXcd dense = h.to_dense();
      INFO(spec.tag(), " n_up=", n_up);
      CHECK((dense - oracle::sector_block(full, n, n_up)).cwiseAbs().maxCoeff() < 1e-13);
      CHECK((dense - dense.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
}

TEST_CASE("[H, S^2] vanishes and S_z blocks are closed") {
  for (const auto& spec : small_lattices()) {
    const int n = spec.n_sites();
    const auto h = oracle::hamiltonian(spec, 1.7);
    const auto s2 = oracle::total_spin_squared(n);
    INFO(spec.tag());
    CHECK((h * s2 - s2 * h).norm() < 1e-12 * std::max(1.0, h.norm()));
    // No element couples different magnetizations.
    double leak = 0.0;
    for (int r = 0; r < h.rows(); ++r) {
      for (int c = 0; c < h.cols(); ++c) {
        if (__builtin_popcount(r) != __builtin_popcount(c)) leak = std::max(leak, std::abs(h(r, c)));
      }
    }
    CHECK(leak == 0.0);
  }
}

TEST_CASE("spectra are invariant under lambda -> -lambda") {
  for (const auto& spec : small_lattices()) {
    for (int n_up = 0; 2 * n_up <= spec.n_sites(); ++n_up) {
      const auto a = sorted(oracle::eigenvalues(assemble({spec, 1.3, n_up}).to_dense()));
      const auto b = sorted(oracle::eigenvalues(assemble({spec, -1.3, n_up}).to_dense()));
      CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("matvec: zero, reality, dense agreement, serial == parallel") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  const auto spec = build_ladder_a(10, true);
  const auto h = assemble({spec, 1.1, 5});
  const auto n = static_cast<Eigen::Index>(h.dim());
  CHECK(h.apply(Eigen::VectorXcd::Zero(n)).norm() == 0.0);
  Eigen::VectorXcd v(n);
  for (auto& x : v) x = {g(rng), g(rng)};
  const Eigen::VectorXcd hv = h.apply(v);
  CHECK(std::abs(v.dot(hv).imag()) < 1e-10 * std::abs(v.dot(hv)));

  const Eigen::MatrixXcd dense = h.to_dense();
  CHECK((dense * v - hv).norm() < 1e-12 * hv.norm());

  const auto* sparse = h.sparse();
  REQUIRE(sparse != nullptr);
  Eigen::VectorXcd y1(n), y2(n);
  sparse->apply_serial({v.data(), static_cast<std::size_t>(n)}, {y1.data(), static_cast<std::size_t>(n)});
  sparse->apply({v.data(), static_cast<std::size_t>(n)}, {y2.data(), static_cast<std::size_t>(n)});
  CHECK((y1 - y2).norm() == 0.0);

  AssemblyOptions mf;
  mf.force_matrix_free = true;
  const auto hm = assemble({spec, 1.1, 5}, mf);
  CHECK(hm.matrix_free());
  CHECK((hm.apply(v) - hv).norm() < 1e-12 * hv.norm());

  Eigen::VectorXcd wrong(n + 1);
  CHECK_THROWS_AS(h.apply({wrong.data(), static_cast<std::size_t>(n + 1)},
                          {y1.data(), static_cast<std::size_t>(n)}),
                  std::invalid_argument);
}

TEST_CASE("memory budget switches to matrix-free") {
  const auto spec = build_ladder_a(12, true);
  AssemblyOptions tiny;
  tiny.max_nonzeros = 100;
  const auto h = assemble({spec, 0.5, 6}, tiny);
  CHECK(h.matrix_free());
  const auto stored = assemble({spec, 0.5, 6});
  CHECK_FALSE(stored.matrix_free());
  CHECK(stored.sparse()->nnz() == count_csr_nonzeros(*stored.basis(), CouplingTable::hamiltonian(spec, 0.5)));
}

TEST_CASE("stored matrix has Hermitian partner entries and no zeros") {
  const auto spec = build_torus(3, 3);
  const auto h = assemble({spec, 2.0, 4});
  const auto& a = h.sparse()->matrix();
  for (std::size_t r = 0; r < a.dim; ++r) {
    for (std::size_t p = a.row_ptr[r]; p < a.row_ptr[r + 1]; ++p) {
      REQUIRE(a.val[p] != cplx{0, 0});
      const std::size_t c = a.col[p];
      bool found = false;
      for (std::size_t q = a.row_ptr[c]; q < a.row_ptr[c + 1]; ++q) {
        if (a.col[q] == r) {
          found = std::abs(a.val[q] - std::conj(a.val[p])) < 1e-14;
          break;
        }
      }
      REQUIRE(found);
    }
  }
}

TEST_CASE("non-finite lambda is rejected") {
  const auto spec = build_ring(5);
  CHECK_THROWS_AS(assemble({spec, std::nan(""), 2}), std::invalid_argument);
}

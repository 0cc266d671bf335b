#pragma once

#include <complex>
#include <vector>

#include "chiral/hilbert.hpp"
#include "chiral/lattice.hpp"

namespace chiral {

using cplx = std::complex<double>;

struct Term {
  BasisState state;
  cplx amplitude;
};

// Both generators below emit <t|O|s> for every basis state t reached from s.

/// sigma_i . sigma_j = 2 SWAP_ij - 1.
template <class Emit>
inline void exchange_terms(int i, int j, BasisState s, Emit&& emit) {
  const BasisState mi = BasisState{1} << i;
  const BasisState mj = BasisState{1} << j;
  if (((s & mi) != 0) == ((s & mj) != 0)) {
    emit(s, cplx{1.0, 0.0});
  } else {
    emit(s, cplx{-1.0, 0.0});
    emit(s ^ mi ^ mj, cplx{2.0, 0.0});
  }
}

/// sigma_i . (sigma_j x sigma_k) written as
///   Z_i A_jk - Z_j A_ik + Z_k A_ij,   A_ab = X_a Y_b - Y_a X_b
///                                         = 2i (s+_a s-_b - s-_a s+_b).
/// Every piece conserves S_z.
template <class Emit>
inline void chiral_terms(int i, int j, int k, BasisState s, Emit&& emit) {
  const auto up = [s](int site) { return ((s >> site) & 1U) != 0; };
  const auto piece = [&](int z, int a, int b, double sign) {
    const bool ua = up(a);
    const bool ub = up(b);
    if (ua == ub) return;
    const double zval = up(z) ? 1.0 : -1.0;
    // s+_a s-_b raises a (down -> up) and lowers b; it contributes +2i.
    const double im = ub ? 2.0 : -2.0;
    emit(s ^ (BasisState{1} << a) ^ (BasisState{1} << b), cplx{0.0, sign * zval * im});
  };
  piece(i, j, k, 1.0);
  piece(j, i, k, -1.0);
  piece(k, i, j, 1.0);
}

std::vector<Term> heisenberg_apply(const Bond& bond, BasisState s);
std::vector<Term> chiral_apply(const Plaquette& plaquette, BasisState s);

/// Flattened real couplings of an S_z-conserving Hermitian operator
///   sum coef * sigma_i.sigma_j + sum coef * X_ijk.
struct CouplingTable {
  struct Pair {
    int i, j;
    double coef;
  };
  struct Triple {
    int i, j, k;
    double coef;
  };
  std::vector<Pair> pairs;
  std::vector<Triple> triples;

  /// -sum J sigma.sigma + lambda sum X * chirality.
  static CouplingTable hamiltonian(const LatticeSpec& spec, double lambda);
  /// Oriented total chirality sum X * chirality.
  static CouplingTable total_chirality(const LatticeSpec& spec);
  static CouplingTable single_plaquette(const Plaquette& p);
  static CouplingTable single_pair(int i, int j);
};

/// Emits <t|O|s> for all t. Diagonal contributions are summed and emitted
/// once, after the off-diagonal ones.
template <class Emit>
inline void for_each_term(const CouplingTable& table, BasisState s, Emit&& emit) {
  double diag = 0.0;
  for (const auto& p : table.pairs) {
    const BasisState mi = BasisState{1} << p.i;
    const BasisState mj = BasisState{1} << p.j;
    if (((s & mi) != 0) == ((s & mj) != 0)) {
      diag += p.coef;
    } else {
      diag -= p.coef;
      emit(s ^ mi ^ mj, cplx{2.0 * p.coef, 0.0});
    }
  }
  for (const auto& t : table.triples) {
    chiral_terms(t.i, t.j, t.k, s,
                 [&](BasisState target, cplx amp) { emit(target, t.coef * amp); });
  }
  if (diag != 0.0) emit(s, cplx{diag, 0.0});
}

}  // namespace chiral

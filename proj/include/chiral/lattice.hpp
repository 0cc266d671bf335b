#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace chiral {

enum class GeometryKind { LadderA, LadderB, LadderC, Ring, Torus, Custom };

struct Geometry {
  GeometryKind kind = GeometryKind::Custom;
  bool periodic = true;
  int rows = 0;  // torus only
  int cols = 0;  // torus only
};

/// Heisenberg coupling -J (sigma_i . sigma_j) with J = sign.
struct Bond {
  int i = 0;
  int j = 0;
  int sign = 1;
};

/// Oriented chiral term X * sigma_a . (sigma_b x sigma_c).
///
/// The vertex order is part of the operator: a cyclic rotation leaves it
/// unchanged, a transposition flips its sign.
struct Plaquette {
  std::array<int, 3> sites{};
  int sign = 1;
};

/// Coupling tables of one lattice. Immutable once built.
class LatticeSpec {
 public:
  LatticeSpec() = default;
  LatticeSpec(int n_sites, std::vector<Bond> bonds,
              std::vector<Plaquette> plaquettes, Geometry geometry = {});

  int n_sites() const noexcept { return n_sites_; }
  const std::vector<Bond>& bonds() const noexcept { return bonds_; }
  const std::vector<Plaquette>& plaquettes() const noexcept {
    return plaquettes_;
  }
  const Geometry& geometry() const noexcept { return geometry_; }

  bool is_torus() const noexcept {
    return geometry_.kind == GeometryKind::Torus;
  }
  /// Row-major site index on a torus, coordinates taken modulo the extent.
  int torus_site(int row, int col) const;

  /// Index into plaquettes() whose site set equals {a,b,c}, or -1.
  int find_plaquette(int a, int b, int c) const;
  /// Index into bonds() joining a and b (either order), or -1.
  int find_bond(int a, int b) const;

  /// Tag accepted by parse_geometry that rebuilds this lattice.
  std::string tag() const;

 private:
  int n_sites_ = 0;
  std::vector<Bond> bonds_;
  std::vector<Plaquette> plaquettes_;
  Geometry geometry_;
};

LatticeSpec build_ladder_a(int n_sites, bool periodic = true);
LatticeSpec build_ladder_b(int n_sites, bool periodic = true);
LatticeSpec build_ladder_c(int n_sites);
LatticeSpec build_ring(int n_sites);
LatticeSpec build_torus(int rows, int cols);

/// Human-readable invariant violations; empty iff the spec is well formed.
std::vector<std::string> validate(const LatticeSpec& spec);

/// `ladder-a:N[:open]`, `ladder-b:N[:open]`, `ladder-c:N`, `ring:N`,
/// `torus:RxC`. Throws std::invalid_argument on malformed tags.
LatticeSpec parse_geometry(std::string_view tag);

/// Rotates the vertex list so the smallest index comes first. Cyclic
/// rotations preserve the oriented chiral operator.
std::array<int, 3> canonical_rotation(std::array<int, 3> sites);

}  // namespace chiral

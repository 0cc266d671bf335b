#include "chiral/lattice.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <stdexcept>
#include <utility>

namespace chiral {

namespace {

int wrap(int i, int n) { return ((i % n) + n) % n; }

// Accumulates couplings while dropping self-bonds and repeated site sets.
class Builder {
 public:
  explicit Builder(int n_sites) : n_(n_sites) {}

  void bond(int i, int j, int sign = 1) {
    if (i == j) return;
    auto key = std::minmax(i, j);
    if (!seen_bonds_.insert({key.first, key.second}).second) return;
    bonds_.push_back({i, j, sign});
  }

  void plaquette(int a, int b, int c, int sign = 1) {
    if (a == b || b == c || a == c) return;
    std::array<int, 3> key{a, b, c};
    std::sort(key.begin(), key.end());
    if (!seen_plaquettes_.insert(key).second) return;
    plaquettes_.push_back({canonical_rotation({a, b, c}), sign});
  }

  LatticeSpec finish(Geometry geometry) && {
    return LatticeSpec(n_, std::move(bonds_), std::move(plaquettes_),
                       geometry);
  }

 private:
  int n_;
  std::vector<Bond> bonds_;
  std::vector<Plaquette> plaquettes_;
  std::set<std::pair<int, int>> seen_bonds_;
  std::set<std::array<int, 3>> seen_plaquettes_;
};

int parse_int(std::string_view text, std::string_view tag) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument("bad integer '" + std::string(text) +
                                "' in geometry tag '" + std::string(tag) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

std::array<int, 3> canonical_rotation(std::array<int, 3> sites) {
  auto first = std::min_element(sites.begin(), sites.end());
  std::rotate(sites.begin(), first, sites.end());
  return sites;
}

LatticeSpec::LatticeSpec(int n_sites, std::vector<Bond> bonds,
                         std::vector<Plaquette> plaquettes, Geometry geometry)
    : n_sites_(n_sites),
      bonds_(std::move(bonds)),
      plaquettes_(std::move(plaquettes)),
      geometry_(geometry) {
  if (n_sites <= 0) throw std::invalid_argument("lattice needs at least one site");
}

int LatticeSpec::torus_site(int row, int col) const {
  if (!is_torus()) throw std::logic_error("torus_site on a non-torus lattice");
  return wrap(row, geometry_.rows) * geometry_.cols + wrap(col, geometry_.cols);
}

int LatticeSpec::find_plaquette(int a, int b, int c) const {
  std::array<int, 3> want{a, b, c};
  std::sort(want.begin(), want.end());
  for (std::size_t p = 0; p < plaquettes_.size(); ++p) {
    auto have = plaquettes_[p].sites;
    std::sort(have.begin(), have.end());
    if (have == want) return static_cast<int>(p);
  }
  return -1;
}

int LatticeSpec::find_bond(int a, int b) const {
  for (std::size_t k = 0; k < bonds_.size(); ++k) {
    const auto& bd = bonds_[k];
    if ((bd.i == a && bd.j == b) || (bd.i == b && bd.j == a)) {
      return static_cast<int>(k);
    }
  }
  return -1;
}

std::string LatticeSpec::tag() const {
  const auto n = std::to_string(n_sites_);
  switch (geometry_.kind) {
    case GeometryKind::LadderA:
      return "ladder-a:" + n + (geometry_.periodic ? "" : ":open");
    case GeometryKind::LadderB:
      return "ladder-b:" + n + (geometry_.periodic ? "" : ":open");
    case GeometryKind::LadderC:
      return "ladder-c:" + n;
    case GeometryKind::Ring:
      return "ring:" + n;
    case GeometryKind::Torus:
      return "torus:" + std::to_string(geometry_.rows) + "x" +
             std::to_string(geometry_.cols);
    case GeometryKind::Custom:
      break;
  }
  return "custom:" + n;
}

LatticeSpec build_ladder_a(int n_sites, bool periodic) {
  if (n_sites < 3) throw std::invalid_argument("ladder-a needs at least 3 sites");
  if (periodic && n_sites < 6) {
    throw std::invalid_argument("periodic ladder-a needs at least 6 sites");
  }
  if (periodic && n_sites % 2 != 0) {
    // (-1)^i cannot alternate consistently around an odd cycle.
    throw std::invalid_argument("periodic ladder-a needs an even number of sites");
  }
  Builder b(n_sites);
  const int n = n_sites;
  for (int i = 0; i < n; ++i) {
    if (periodic || i + 1 < n) b.bond(i, wrap(i + 1, n));
  }
  for (int i = 0; i < n; ++i) {
    if (periodic || i + 2 < n) b.bond(i, wrap(i + 2, n));
  }
  for (int i = 0; i < n; ++i) {
    if (!periodic && i + 2 >= n) break;
    b.plaquette(i, wrap(i + 1, n), wrap(i + 2, n), i % 2 == 0 ? 1 : -1);
  }
  return std::move(b).finish({GeometryKind::LadderA, periodic, 0, 0});
}

LatticeSpec build_ladder_b(int n_sites, bool periodic) {
  if (n_sites < 3) throw std::invalid_argument("ladder-b needs at least 3 sites");
  Builder b(n_sites);
  const int n = n_sites;
  for (int i = 0; i < n; ++i) {
    if (periodic || i + 1 < n) b.bond(i, wrap(i + 1, n));
  }
  // Lower leg (2i, 2i+2) closes each chiral triangle (2i, 2i+1, 2i+2).
  for (int i = 0; 2 * i < n; ++i) {
    const int a = 2 * i;
    if (periodic ? (i < n / 2) : (a + 2 < n)) b.bond(a, wrap(a + 2, n));
  }
  for (int i = 0; 2 * i < n; ++i) {
    const int a = 2 * i;
    if (periodic ? (i < n / 2) : (a + 2 < n)) {
      b.plaquette(a, wrap(a + 1, n), wrap(a + 2, n), 1);
    }
  }
  return std::move(b).finish({GeometryKind::LadderB, periodic, 0, 0});
}

LatticeSpec build_ladder_c(int n_sites) {
  if (n_sites < 3 || n_sites % 3 != 0) {
    throw std::invalid_argument("ladder-c needs a positive multiple of 3 sites");
  }
  Builder b(n_sites);
  const int n = n_sites;
  for (int t = 0; 3 * t < n; ++t) {
    const int a = 3 * t;
    b.bond(a, a + 1);
    b.bond(a + 1, a + 2);
    b.bond(a, a + 2);
    b.plaquette(a, a + 1, a + 2, 1);
  }
  // Middle vertex of each triangle links to the next triangle's middle vertex.
  if (n > 3) {
    for (int t = 0; 3 * t < n; ++t) b.bond(3 * t + 1, wrap(3 * t + 4, n));
  }
  return std::move(b).finish({GeometryKind::LadderC, true, 0, 0});
}

LatticeSpec build_ring(int n_sites) {
  if (n_sites < 4) throw std::invalid_argument("ring needs at least 4 sites");
  Builder b(n_sites);
  for (int i = 1; i < n_sites; ++i) b.bond(0, i);
  for (int i = 1; i + 1 < n_sites; ++i) b.bond(i, i + 1);
  for (int i = 1; i + 1 < n_sites; ++i) b.plaquette(0, i, i + 1, 1);
  return std::move(b).finish({GeometryKind::Ring, false, 0, 0});
}

LatticeSpec build_torus(int rows, int cols) {
  if (rows < 2 || cols < 2) {
    throw std::invalid_argument("torus needs at least 2 rows and 2 columns");
  }
  const int n = rows * cols;
  auto site = [&](int r, int c) { return wrap(r, rows) * cols + wrap(c, cols); };
  Builder b(n);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      b.bond(site(r, c), site(r, c + 1));
      b.bond(site(r, c), site(r + 1, c));
      b.bond(site(r, c), site(r + 1, c + 1));
    }
  }
  // Both triangles of a cell have positive signed area in (col, row)
  // coordinates: (r,c) -> (r,c+1) -> (r+1,c+1) and
  // (r,c) -> (r+1,c+1) -> (r+1,c).
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      b.plaquette(site(r, c), site(r, c + 1), site(r + 1, c + 1), 1);
      b.plaquette(site(r, c), site(r + 1, c + 1), site(r + 1, c), 1);
    }
  }
  return std::move(b).finish({GeometryKind::Torus, true, rows, cols});
}

std::vector<std::string> validate(const LatticeSpec& spec) {
  std::vector<std::string> issues;
  const int n = spec.n_sites();
  auto in_range = [n](int s) { return s >= 0 && s < n; };

  std::set<std::pair<int, int>> bond_keys;
  for (const auto& bd : spec.bonds()) {
    const auto label = "bond (" + std::to_string(bd.i) + "," + std::to_string(bd.j) + ")";
    if (!in_range(bd.i) || !in_range(bd.j)) {
      issues.push_back(label + ": site index out of range");
      continue;
    }
    if (bd.i == bd.j) issues.push_back(label + ": self-coupling");
    if (bd.sign != 1 && bd.sign != -1) issues.push_back(label + ": sign must be +1 or -1");
    auto key = std::minmax(bd.i, bd.j);
    if (!bond_keys.insert({key.first, key.second}).second) {
      issues.push_back(label + ": duplicate bond");
    }
  }

  std::set<std::array<int, 3>> plaquette_keys;
  for (const auto& pq : spec.plaquettes()) {
    const auto& s = pq.sites;
    const auto label = "plaquette (" + std::to_string(s[0]) + "," +
                       std::to_string(s[1]) + "," + std::to_string(s[2]) + ")";
    if (!in_range(s[0]) || !in_range(s[1]) || !in_range(s[2])) {
      issues.push_back(label + ": site index out of range");
      continue;
    }
    if (s[0] == s[1] || s[1] == s[2] || s[0] == s[2]) {
      issues.push_back(label + ": repeated site");
      continue;
    }
    if (pq.sign != 1 && pq.sign != -1) issues.push_back(label + ": sign must be +1 or -1");
    auto key = s;
    std::sort(key.begin(), key.end());
    if (!plaquette_keys.insert(key).second) issues.push_back(label + ": duplicate plaquette");
    for (auto [a, c] : {std::pair{s[0], s[1]}, std::pair{s[1], s[2]}, std::pair{s[0], s[2]}}) {
      auto edge = std::minmax(a, c);
      if (!bond_keys.count({edge.first, edge.second})) {
        issues.push_back(label + ": edge (" + std::to_string(a) + "," +
                         std::to_string(c) + ") is not a bond");
        break;
      }
    }
  }
  return issues;
}

LatticeSpec parse_geometry(std::string_view tag) {
  const auto parts = split(tag, ':');
  if (parts.size() < 2) {
    throw std::invalid_argument("geometry tag '" + std::string(tag) +
                                "' must look like kind:size");
  }
  const auto kind = parts[0];
  bool open = false;
  if (parts.size() == 3) {
    if (parts[2] != "open" || (kind != "ladder-a" && kind != "ladder-b")) {
      throw std::invalid_argument("unsupported geometry modifier in '" +
                                  std::string(tag) + "'");
    }
    open = true;
  } else if (parts.size() > 3) {
    throw std::invalid_argument("too many fields in geometry tag '" + std::string(tag) + "'");
  }

  if (kind == "torus") {
    const auto dims = split(parts[1], 'x');
    if (dims.size() != 2) {
      throw std::invalid_argument("torus size must be RxC in '" + std::string(tag) + "'");
    }
    return build_torus(parse_int(dims[0], tag), parse_int(dims[1], tag));
  }
  const int n = parse_int(parts[1], tag);
  if (kind == "ladder-a") return build_ladder_a(n, !open);
  if (kind == "ladder-b") return build_ladder_b(n, !open);
  if (kind == "ladder-c") return build_ladder_c(n);
  if (kind == "ring") return build_ring(n);
  throw std::invalid_argument("unknown geometry kind '" + std::string(kind) + "'");
}

}  // namespace chiral

#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace chiral {

/// Computational basis state; bit i set means spin i points up.
using BasisState = std::uint32_t;

inline constexpr int kMaxSites = 32;

/// All N-bit patterns with a fixed number of up spins, sorted ascending,
/// with combinatorial (colex) ranking.
class SectorBasis {
 public:
  SectorBasis(int n_sites, int n_up);

  int n_sites() const noexcept { return n_sites_; }
  int n_up() const noexcept { return n_up_; }
  std::size_t size() const noexcept { return states_.size(); }

  BasisState state(std::size_t index) const { return states_[index]; }
  std::span<const BasisState> states() const noexcept { return states_; }

  /// Position of `s` in states(). Throws std::invalid_argument when `s` has
  /// the wrong popcount or bits above n_sites.
  std::size_t rank(BasisState s) const;

  /// rank() without validation, for the matvec hot loop.
  std::size_t rank_unchecked(BasisState s) const noexcept {
    std::size_t r = 0;
    int t = 0;
    while (s != 0) {
      const int p = std::countr_zero(s);
      r += binom_[static_cast<std::size_t>(p) * kBinomCols + static_cast<std::size_t>(++t)];
      s &= s - 1;
    }
    return r;
  }

  bool contains(BasisState s) const noexcept;

 private:
  int n_sites_;
  int n_up_;
  std::vector<BasisState> states_;
  static constexpr std::size_t kBinomCols = kMaxSites + 2;
  // binom_[n * kBinomCols + k] = C(n, k)
  std::array<std::size_t, (kMaxSites + 1) * kBinomCols> binom_{};
};

std::size_t binomial(int n, int k);

/// Sector for `n_up` up spins out of `n_sites`.
inline SectorBasis enumerate_sector(int n_sites, int n_up) {
  return SectorBasis(n_sites, n_up);
}

}  // namespace chiral

#include "chiral/hilbert.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace chiral {

std::size_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / i;
  return r;
}

SectorBasis::SectorBasis(int n_sites, int n_up) : n_sites_(n_sites), n_up_(n_up) {
  if (n_sites < 1 || n_sites > kMaxSites) {
    throw std::invalid_argument("n_sites must be in [1, 32], got " + std::to_string(n_sites));
  }
  if (n_up < 0 || n_up > n_sites) {
    throw std::invalid_argument("n_up must be in [0, n_sites], got " + std::to_string(n_up));
  }

  for (int n = 0; n <= kMaxSites; ++n) {
    binom_[n * kBinomCols] = 1;
    for (int k = 1; k <= n; ++k) {
      binom_[n * kBinomCols + k] =
          binom_[(n - 1) * kBinomCols + k - 1] + binom_[(n - 1) * kBinomCols + k];
    }
  }

  const std::size_t count = binom_[n_sites * kBinomCols + n_up];
  states_.reserve(count);
  if (n_up == 0) {
    states_.push_back(0);
    return;
  }
  // Gosper's hack walks fixed-popcount words in increasing order.
  std::uint64_t s = (std::uint64_t{1} << n_up) - 1;
  const std::uint64_t limit = std::uint64_t{1} << n_sites;
  while (s < limit) {
    states_.push_back(static_cast<BasisState>(s));
    const std::uint64_t c = s & (~s + 1);
    const std::uint64_t r = s + c;
    s = (((r ^ s) >> 2) / c) | r;
  }
}

bool SectorBasis::contains(BasisState s) const noexcept {
  if (n_sites_ < kMaxSites && (s >> n_sites_) != 0) return false;
  return std::popcount(s) == n_up_;
}

std::size_t SectorBasis::rank(BasisState s) const {
  if (!contains(s)) {
    throw std::invalid_argument("state " + std::to_string(s) + " is not in the sector N=" +
                                std::to_string(n_sites_) + ", n_up=" + std::to_string(n_up_));
  }
  return rank_unchecked(s);
}

}  // namespace chiral

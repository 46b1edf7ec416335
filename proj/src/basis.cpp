#include "mottlab/basis.hpp"

#include <algorithm>
#include <string>

#include "mottlab/errors.hpp"

namespace mottlab {

std::uint64_t constrained_count(int L, int N, int n_max) {
  // ways[n] = number of ways to place n bosons on the sites seen so far.
  std::vector<std::uint64_t> ways(N + 1, 0);
  ways[0] = 1;
  for (int s = 0; s < L; ++s) {
    std::vector<std::uint64_t> next(N + 1, 0);
    for (int n = 0; n <= N; ++n) {
      if (ways[n] == 0) continue;
      for (int k = 0; k <= n_max && n + k <= N; ++k) next[n + k] += ways[n];
    }
    ways.swap(next);
  }
  return ways[N];
}

Basis::Basis(int L, int N, int n_max) : L_(L), N_(N), n_max_(n_max) {
  require(L >= 1 && L <= 16, "chain length must be in [1, 16]");
  require(N >= 0 && N <= 32, "particle number must be in [0, 32]");
  require(n_max >= 1 && n_max <= 15, "n_max must be in [1, 15]");
  const std::uint64_t dim = constrained_count(L, N, n_max);
  if (dim == 0) {
    fail(ErrorKind::InvalidParameter,
         "no occupation vectors satisfy N <= L * n_max");
  }
  if (dim > kMaxDimension) {
    fail(ErrorKind::Capacity, "basis dimension " + std::to_string(dim) +
                                  " exceeds the cap of " +
                                  std::to_string(kMaxDimension));
  }
  occ_.reserve(dim * L);
  keys_.reserve(dim);

  std::vector<std::uint8_t> cur(L, 0);
  // Depth-first, largest occupation first on each site.
  auto fill = [&](auto&& self, int site, int remaining) -> void {
    if (site == L - 1) {
      if (remaining > n_max) return;
      cur[site] = static_cast<std::uint8_t>(remaining);
      occ_.insert(occ_.end(), cur.begin(), cur.end());
      keys_.push_back(encode(cur));
      return;
    }
    const int tail_capacity = (L - 1 - site) * n_max;
    for (int k = std::min(n_max, remaining); k >= 0; --k) {
      if (remaining - k > tail_capacity) break;
      cur[site] = static_cast<std::uint8_t>(k);
      self(self, site + 1, remaining - k);
    }
  };
  fill(fill, 0, N);
}

std::uint64_t Basis::encode(std::span<const std::uint8_t> occupations) const {
  std::uint64_t key = 0;
  for (auto n : occupations) key = key * 16 + n;
  return key;
}

std::size_t Basis::index(std::span<const std::uint8_t> occupations) const {
  if (occupations.size() != static_cast<std::size_t>(L_)) return size();
  const std::uint64_t key = encode(occupations);
  auto it = std::lower_bound(keys_.begin(), keys_.end(), key,
                             std::greater<std::uint64_t>());
  if (it == keys_.end() || *it != key) return size();
  return static_cast<std::size_t>(it - keys_.begin());
}

}  // namespace mottlab

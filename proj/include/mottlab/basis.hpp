#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mottlab {

/// Fixed-N occupation basis of an L-site chain with per-site cap n_max.
/// States are enumerated in descending lexicographic order, so for L = 2,
/// N = 2 the order is {20, 11, 02}.
class Basis {
 public:
  static constexpr std::size_t kMaxDimension = 200000;

  Basis(int L, int N, int n_max);

  int sites() const { return L_; }
  int particles() const { return N_; }
  int max_occupation() const { return n_max_; }
  std::size_t size() const { return keys_.size(); }

  std::span<const std::uint8_t> state(std::size_t i) const {
    return {occ_.data() + i * L_, static_cast<std::size_t>(L_)};
  }
  /// Index of an occupation vector, or size() if it is not in the basis.
  std::size_t index(std::span<const std::uint8_t> occupations) const;

 private:
  std::uint64_t encode(std::span<const std::uint8_t> occupations) const;

  int L_, N_, n_max_;
  std::vector<std::uint8_t> occ_;
  std::vector<std::uint64_t> keys_;  // descending, parallel to occ_
};

/// Number of occupation vectors with sum N and entries in [0, n_max].
std::uint64_t constrained_count(int L, int N, int n_max);

}  // namespace mottlab

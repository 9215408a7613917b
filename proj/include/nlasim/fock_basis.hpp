#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "nlasim/common.hpp"

namespace nlasim {

// Basis of occupation-number vectors (n_1, ..., n_m) with sum(n_i) <= cutoff.
//
// Enumeration order is fixed and part of the contract: states are sorted by
// total photon number ascending, and within one total-photon sector
// lexicographically ascending on the tuple (n_1, ..., n_m). For two modes with
// cutoff 2 the order is
//   (0,0) | (0,1) (1,0) | (0,2) (1,1) (2,0)
// so the vacuum is always index 0 and each sector occupies a contiguous block.
class FockBasis {
 public:
  FockBasis(int num_modes, int photon_cutoff)
      : modes_(num_modes), cutoff_(photon_cutoff) {
    if (modes_ < 1 || modes_ > max_modes)
      throw std::invalid_argument("FockBasis: mode count must be in [1, " +
                                  std::to_string(max_modes) + "]");
    if (cutoff_ < 0 || cutoff_ > 8)
      throw std::invalid_argument("FockBasis: photon cutoff must be in [0, 8]");

    std::vector<int> occ(modes_, 0);
    for (int total = 0; total <= cutoff_; ++total) enumerate_sector(occ, 0, total);

    std::size_t packed_size = 1;
    for (int m = 0; m < modes_; ++m) packed_size *= std::size_t(cutoff_ + 1);
    lookup_.assign(packed_size, -1);
    for (int i = 0; i < dim(); ++i) lookup_[pack(states_[i])] = i;
  }

  int num_modes() const { return modes_; }
  int photon_cutoff() const { return cutoff_; }
  int dim() const { return int(states_.size()); }

  const std::vector<int>& occupation(int index) const { return states_.at(index); }

  int total_photons(int index) const {
    const auto& s = states_.at(index);
    return std::accumulate(s.begin(), s.end(), 0);
  }

  // Index of an occupation vector, or -1 when it lies outside the cutoff.
  int index_of(const std::vector<int>& occ) const {
    if (int(occ.size()) != modes_) return -1;
    for (int n : occ)
      if (n < 0 || n > cutoff_) return -1;
    if (std::accumulate(occ.begin(), occ.end(), 0) > cutoff_) return -1;
    return lookup_[pack(occ)];
  }

  bool operator==(const FockBasis& other) const {
    return modes_ == other.modes_ && cutoff_ == other.cutoff_;
  }
  bool operator!=(const FockBasis& other) const { return !(*this == other); }

 private:
  void enumerate_sector(std::vector<int>& occ, int mode, int remaining) {
    if (mode == modes_ - 1) {
      occ[mode] = remaining;
      states_.push_back(occ);
      return;
    }
    for (int n = 0; n <= remaining; ++n) {
      occ[mode] = n;
      enumerate_sector(occ, mode + 1, remaining - n);
    }
    occ[mode] = 0;
  }

  std::size_t pack(const std::vector<int>& occ) const {
    std::size_t key = 0;
    for (int m = modes_ - 1; m >= 0; --m) key = key * std::size_t(cutoff_ + 1) + occ[m];
    return key;
  }

  int modes_;
  int cutoff_;
  std::vector<std::vector<int>> states_;
  std::vector<int> lookup_;
};

}  // namespace nlasim

#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace lcl {

using NodeId = std::uint32_t;
using Round = std::uint32_t;

// Per-node membership flag for induced subgraphs. Empty means "every node".
using NodeMask = std::vector<std::uint8_t>;

inline bool in_mask(const NodeMask& mask, NodeId v) {
  return mask.empty() || mask[v] != 0;
}

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Rng = std::mt19937_64;

// Portable bounded draw (std distributions differ between standard libraries).
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

template <class T>
void shuffle(std::vector<T>& xs, Rng& rng) {
  for (std::size_t i = xs.size(); i > 1; --i) {
    std::size_t j = uniform_below(rng, i);
    std::swap(xs[i - 1], xs[j]);
  }
}

}  // namespace lcl

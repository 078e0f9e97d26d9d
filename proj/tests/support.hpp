#pragma once

#include <map>
#include <tuple>

#include "investcoin/group.hpp"

namespace investcoin::testing {

// Parameter generation dominates small tests; generate each size once.
inline const GroupParams& CachedParams(unsigned q_bits, unsigned l = 16, unsigned n = 4,
                                       unsigned lambda = 5) {
  static std::map<std::tuple<unsigned, unsigned, unsigned, unsigned>, GroupParams> cache;
  auto key = std::make_tuple(q_bits, l, n, lambda);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, GenerateParams(q_bits, l, n, lambda, "unit-tests")).first;
  }
  return it->second;
}

inline const GroupParams& Toy() {
  static const GroupParams params = ToyParams();
  return params;
}

}  // namespace investcoin::testing

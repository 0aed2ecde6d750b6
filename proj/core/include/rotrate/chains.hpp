#pragma once

#include <cstddef>
#include <vector>

#include "rotrate/torus.hpp"

namespace rotrate {

struct ChainReport {
  /// Every sigma in [1, N) with torus_distance(theta_sigma, theta_0) < delta1.
  std::vector<std::size_t> returns;
  /// Generators used by the chain, in selection order.
  std::vector<std::size_t> sigmas;
  std::size_t gcd = 0;
  bool reachable = false;
  std::size_t reached_count = 0;
};

/// Near returns to theta_0 and a chain of small steps built from them.
///
/// sigma_1 is the first return. sigma_2 is the return coprime to sigma_1
/// with sigma_1 + sigma_2 < N whose signed displacement from theta_0 has the
/// smallest Euclidean norm. If no coprime return exists, further returns are
/// added greedily while they reduce the gcd. The chain then walks
/// s -> s - sigma_1 while that stays non-negative, else s + sigma_2, back to 0,
/// extends every chain point by repeated +sigma_2, and for later generators
/// by repeated +-sigma_j.
ChainReport near_return_chain(const std::vector<TorusPoint>& theta_sequence, double delta1,
                              std::size_t n);

}  // namespace rotrate

#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "gpnas/types.hpp"

namespace gpnas {

/// Pair accounting for Kendall's tau-b. With T = n(n-1)/2:
///   concordant + discordant + ties_x + ties_y - ties_xy = T
/// where ties_x / ties_y count all pairs tied in x / y and ties_xy the pairs tied in both.
struct TauResult {
  double tau = 0.0;
  std::int64_t concordant = 0;
  std::int64_t discordant = 0;
  std::int64_t ties_x = 0;
  std::int64_t ties_y = 0;
  std::int64_t ties_xy = 0;
};

/// tau-b = (C - D) / sqrt((T - Tx)(T - Ty)), computed in O(n log n) (Knight's merge-sort
/// algorithm). Throws Error(Usage) on length mismatch or n < 2, Error(Numerical) when
/// either input is entirely tied and on NaN input.
TauResult kendall_tau(const Eigen::Ref<const VectorXd>& x, const Eigen::Ref<const VectorXd>& y);

/// tau-b from already-counted pairs; shared by the fast path and brute-force checks.
double tau_b_from_counts(std::int64_t n, std::int64_t concordant, std::int64_t discordant, std::int64_t ties_x,
                         std::int64_t ties_y);

}  // namespace gpnas

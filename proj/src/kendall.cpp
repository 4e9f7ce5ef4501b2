#include "gpnas/kendall.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "gpnas/error.hpp"

namespace gpnas {

namespace {

std::int64_t pairs(std::int64_t t) { return t * (t - 1) / 2; }

/// Sum of t(t-1)/2 over runs of equal keys in an already sorted sequence.
template <typename Equal>
std::int64_t tied_pairs(const std::vector<Index>& order, Equal equal) {
  std::int64_t total = 0;
  std::int64_t run = 1;
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (equal(order[i - 1], order[i])) {
      ++run;
    } else {
      total += pairs(run);
      run = 1;
    }
  }
  return total + pairs(run);
}

/// Stable merge sort of `idx` by y; returns the number of strict inversions.
std::int64_t merge_count(std::vector<Index>& idx, std::vector<Index>& buf, std::size_t lo, std::size_t hi,
                         const Eigen::Ref<const VectorXd>& y) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t swaps = merge_count(idx, buf, lo, mid, y) + merge_count(idx, buf, mid, hi, y);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (y[idx[j]] < y[idx[i]]) {
      swaps += static_cast<std::int64_t>(mid - i);
      buf[k++] = idx[j++];
    } else {
      buf[k++] = idx[i++];
    }
  }
  while (i < mid) buf[k++] = idx[i++];
  while (j < hi) buf[k++] = idx[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo), buf.begin() + static_cast<std::ptrdiff_t>(hi),
            idx.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

}  // namespace

double tau_b_from_counts(std::int64_t n, std::int64_t concordant, std::int64_t discordant, std::int64_t ties_x,
                         std::int64_t ties_y) {
  const std::int64_t total = pairs(n);
  const double denom = std::sqrt(static_cast<double>(total - ties_x) * static_cast<double>(total - ties_y));
  if (denom == 0.0) fail(ErrorKind::Numerical, "Kendall tau undefined: an input is constant");
  return static_cast<double>(concordant - discordant) / denom;
}

TauResult kendall_tau(const Eigen::Ref<const VectorXd>& x, const Eigen::Ref<const VectorXd>& y) {
  if (x.size() != y.size()) fail(ErrorKind::Usage, "Kendall tau: inputs differ in length");
  if (x.size() < 2) fail(ErrorKind::Usage, "Kendall tau needs at least 2 observations");
  if (x.hasNaN() || y.hasNaN()) fail(ErrorKind::Numerical, "Kendall tau: NaN in input");

  const auto n = static_cast<std::int64_t>(x.size());
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]); });

  TauResult r;
  r.ties_x = tied_pairs(order, [&](Index a, Index b) { return x[a] == x[b]; });
  r.ties_xy = tied_pairs(order, [&](Index a, Index b) { return x[a] == x[b] && y[a] == y[b]; });

  std::vector<Index> buf(order.size());
  r.discordant = merge_count(order, buf, 0, order.size(), y);
  r.ties_y = tied_pairs(order, [&](Index a, Index b) { return y[a] == y[b]; });
  r.concordant = pairs(n) - r.ties_x - r.ties_y + r.ties_xy - r.discordant;
  r.tau = tau_b_from_counts(n, r.concordant, r.discordant, r.ties_x, r.ties_y);
  return r;
}

}  // namespace gpnas

#include "topoexp/atsp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "topoexp/errors.hpp"

namespace topoexp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kImproveEps = 1e-12;

// Cost of the arc that closes the gap left by removing t[a+1..b-1].
double arc_gap(const CostMatrix& c, const std::vector<std::size_t>& t, std::size_t a,
               std::size_t b, std::size_t m) {
  return b > m ? 0.0 : c.at(t[a], t[b]);
}

}  // namespace

double open_tour_cost(const CostMatrix& c, const std::vector<std::size_t>& order) {
  double cost = 0.0;
  std::size_t prev = 0;
  for (std::size_t j : order) {
    cost += c.at(prev, j);
    prev = j;
  }
  return cost;
}

AtspTour solve_atsp_exact(const CostMatrix& c) {
  const std::size_t m = c.size() - 1;
  if (m == 0) return {};
  if (m > 16) throw ContractViolation("solve_atsp_exact: " + std::to_string(m) + " frontiers");
  const std::size_t full = (std::size_t{1} << m) - 1;
  // dp[mask * m + j]: cheapest path from 0 through `mask` ending at frontier j+1.
  std::vector<double> dp((full + 1) * m, kInf);
  std::vector<std::uint8_t> parent((full + 1) * m, 0);
  for (std::size_t j = 0; j < m; ++j) dp[(std::size_t{1} << j) * m + j] = c.at(0, j + 1);
  for (std::size_t mask = 1; mask <= full; ++mask) {
    for (std::size_t j = 0; j < m; ++j) {
      if (!(mask >> j & 1)) continue;
      const double base = dp[mask * m + j];
      if (base == kInf) continue;
      for (std::size_t k = 0; k < m; ++k) {
        if (mask >> k & 1) continue;
        const std::size_t next = mask | (std::size_t{1} << k);
        const double v = base + c.at(j + 1, k + 1);
        if (v < dp[next * m + k]) {
          dp[next * m + k] = v;
          parent[next * m + k] = static_cast<std::uint8_t>(j);
        }
      }
    }
  }
  std::size_t last = 0;
  for (std::size_t j = 1; j < m; ++j) {
    if (dp[full * m + j] < dp[full * m + last]) last = j;
  }
  AtspTour tour;
  tour.cost = dp[full * m + last];
  std::size_t mask = full;
  std::size_t j = last;
  while (true) {
    tour.order.push_back(j + 1);
    const std::size_t prev_mask = mask & ~(std::size_t{1} << j);
    if (prev_mask == 0) break;
    j = parent[mask * m + j];
    mask = prev_mask;
  }
  std::reverse(tour.order.begin(), tour.order.end());
  return tour;
}

AtspTour solve_atsp_heuristic(const CostMatrix& c) {
  const std::size_t m = c.size() - 1;
  // t[0] is the fixed start; position m+1 stands for the free end of the tour.
  std::vector<std::size_t> t{0};
  std::vector<bool> used(m + 1, false);
  for (std::size_t step = 0; step < m; ++step) {
    std::size_t best = 0;
    for (std::size_t j = 1; j <= m; ++j) {
      if (!used[j] && (best == 0 || c.at(t.back(), j) < c.at(t.back(), best))) best = j;
    }
    used[best] = true;
    t.push_back(best);
  }
  auto arc = [&](std::size_t a_pos, std::size_t b_pos) {
    return b_pos > m ? 0.0 : c.at(t[a_pos], t[b_pos]);
  };
  std::vector<double> fwd(m + 1, 0.0);  // fwd[k]: cost of t[1..k] walked forwards
  std::vector<double> rev(m + 1, 0.0);  // rev[k]: same arcs walked backwards
  auto prefix = [&] {
    for (std::size_t k = 2; k <= m; ++k) {
      fwd[k] = fwd[k - 1] + c.at(t[k - 1], t[k]);
      rev[k] = rev[k - 1] + c.at(t[k], t[k - 1]);
    }
  };

  bool improved = true;
  while (improved) {
    improved = false;
    prefix();
    // Reverse t[i..k].
    for (std::size_t i = 1; i < m && !improved; ++i) {
      for (std::size_t k = i + 1; k <= m; ++k) {
        const double before = arc(i - 1, i) + (fwd[k] - fwd[i]) + arc(k, k + 1);
        const double after = c.at(t[i - 1], t[k]) + (rev[k] - rev[i]) +
                             (k + 1 > m ? 0.0 : c.at(t[i], t[k + 1]));
        if (after < before - kImproveEps) {
          std::reverse(t.begin() + static_cast<std::ptrdiff_t>(i),
                       t.begin() + static_cast<std::ptrdiff_t>(k) + 1);
          improved = true;
          break;
        }
      }
    }
    // Move t[i..i+len-1] between t[p] and t[p+1], keeping its direction.
    for (std::size_t len = 1; len <= 3 && !improved; ++len) {
      for (std::size_t i = 1; i + len - 1 <= m && !improved; ++i) {
        const std::size_t e = i + len - 1;
        const double removed = arc(i - 1, i) + arc(e, e + 1) - arc_gap(c, t, i - 1, e + 1, m);
        for (std::size_t p = 0; p <= m; ++p) {
          if (p + 1 >= i && p <= e) continue;
          const double added = c.at(t[p], t[i]) +
                               (p + 1 > m ? 0.0 : c.at(t[e], t[p + 1])) -
                               (p + 1 > m ? 0.0 : c.at(t[p], t[p + 1]));
          if (added < removed - kImproveEps) {
            std::vector<std::size_t> run(t.begin() + static_cast<std::ptrdiff_t>(i),
                                         t.begin() + static_cast<std::ptrdiff_t>(e) + 1);
            t.erase(t.begin() + static_cast<std::ptrdiff_t>(i),
                    t.begin() + static_cast<std::ptrdiff_t>(e) + 1);
            const std::size_t at = p < i ? p + 1 : p + 1 - len;
            t.insert(t.begin() + static_cast<std::ptrdiff_t>(at), run.begin(), run.end());
            improved = true;
            break;
          }
        }
      }
    }
  }
  std::vector<std::size_t> order(t.begin() + 1, t.end());
  return {order, open_tour_cost(c, order)};
}

AtspTour solve_atsp(const CostMatrix& c) {
  if (c.size() == 0) throw ContractViolation("solve_atsp: empty cost matrix");
  std::string unreachable;
  for (std::size_t j = 1; j < c.size(); ++j) {
    if (!std::isfinite(c.at(0, j))) {
      unreachable += (unreachable.empty() ? "" : ", ") + std::to_string(j);
    }
  }
  if (!unreachable.empty()) {
    throw UnreachableError("frontier indices unreachable from start: " + unreachable);
  }
  return c.size() - 1 <= kExactAtspLimit ? solve_atsp_exact(c) : solve_atsp_heuristic(c);
}

}  // namespace topoexp

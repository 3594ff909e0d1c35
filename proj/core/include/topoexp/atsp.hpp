#pragma once

// Open-tour asymmetric TSP from a fixed start (index 0). The return column is
// ignored, so a tour is the order in which indices 1..m are visited.

#include <cstddef>
#include <vector>

namespace topoexp {

// Square (m+1)x(m+1) cost matrix, row-major.
class CostMatrix {
 public:
  explicit CostMatrix(std::size_t size) : size_(size), data_(size * size, 0.0) {}

  std::size_t size() const { return size_; }
  double& at(std::size_t i, std::size_t j) { return data_[i * size_ + j]; }
  double at(std::size_t i, std::size_t j) const { return data_[i * size_ + j]; }

 private:
  std::size_t size_;
  std::vector<double> data_;
};

struct AtspTour {
  std::vector<std::size_t> order;  // indices in 1..m
  double cost = 0.0;
};

inline constexpr std::size_t kExactAtspLimit = 12;

double open_tour_cost(const CostMatrix& c, const std::vector<std::size_t>& order);

// Held-Karp. Throws ContractViolation above 16 frontiers.
AtspTour solve_atsp_exact(const CostMatrix& c);

// Nearest neighbour followed by 2-opt and or-opt moves until no move improves.
AtspTour solve_atsp_heuristic(const CostMatrix& c);

// Exact up to kExactAtspLimit frontiers, heuristic beyond. Throws
// UnreachableError naming the matrix indices with infinite entry cost.
AtspTour solve_atsp(const CostMatrix& c);

}  // namespace topoexp

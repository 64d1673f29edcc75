#include "sbd/solution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sbd {

Solution::Solution(StaggeredGrid grid, Vector x) : grid_(std::move(grid)), dof_(grid_), x_(std::move(x)) {
    if (static_cast<std::size_t>(x_.size()) != dof_.size())
        throw std::invalid_argument("Solution: vector length does not match the grid");
}

double Solution::divergence(int i, int j) const {
    return (u(i + 1, j) - u(i, j)) / grid_.hx() + (v(i, j + 1) - v(i, j)) / grid_.hy();
}

double Solution::max_abs_divergence() const {
    double m = 0.0;
    for (int j = grid_.stokes_begin(); j < grid_.ny(); ++j)
        for (int i = 0; i < grid_.nx(); ++i) m = std::max(m, std::abs(divergence(i, j)));
    return m;
}

}  // namespace sbd

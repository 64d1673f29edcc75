#pragma once

#include <vector>

#include "sbd/grid.hpp"
#include "sbd/linear_system.hpp"

namespace sbd {

/// Solved unknown vector together with the grid it lives on.
class Solution {
public:
    Solution(StaggeredGrid grid, Vector x);

    const StaggeredGrid& grid() const { return grid_; }
    const DofMap& dofs() const { return dof_; }
    const Vector& vector() const { return x_; }

    double u(int i, int j) const { return x_[dof_.u(i, j)]; }
    double v(int i, int j) const { return x_[dof_.v(i, j)]; }
    double p(int i, int j) const { return x_[dof_.p(i, j)]; }
    double Vn(int i) const { return x_[dof_.gamma_vn(i)]; }
    double Vt(int i) const { return x_[dof_.gamma_vt(i)]; }
    double P(int i) const { return x_[dof_.gamma_p(i)]; }

    /// Cell-wise discrete divergence of the Stokes/Brinkman velocity.
    double divergence(int i, int j) const;
    double max_abs_divergence() const;

private:
    StaggeredGrid grid_;
    DofMap dof_;
    Vector x_;
};

}  // namespace sbd

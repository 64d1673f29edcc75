#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "sbd/linear_system.hpp"

namespace sbd {

enum class SolveMethod { DirectLU, Krylov, Auto };

std::string to_string(SolveMethod m);
SolveMethod parse_solve_method(const std::string& name);

struct SolverOptions {
    SolveMethod method = SolveMethod::Auto;
    double tol = 1e-10;
    /// Auto picks DirectLU up to this many unknowns, Krylov beyond.
    std::size_t direct_threshold = 500000;
    int max_iterations = 5000;
    int restart = 150;
    double ilut_drop_tol = 1e-6;
    int ilut_fill_factor = 30;
};

struct SolveReport {
    Vector x;
    double relative_residual = 0.0;  ///< ||Ax - b|| / ||b|| from the original matrix
    double wall_seconds = 0.0;
    double cpu_seconds = 0.0;
    std::string method;
    int iterations = 0;  ///< Krylov iterations, or refinement steps for LU
};

/// Singular matrix or Krylov non-convergence; carries the best residual seen.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double best_residual)
        : std::runtime_error(what), best_residual_(best_residual) {}
    double best_residual() const noexcept { return best_residual_; }

private:
    double best_residual_;
};

double relative_residual(const SparseMatrix& A, const Vector& x, const Vector& b);

SolveReport solve(const LinearSystem& system, const SolverOptions& options = {});
inline SolveReport solve(const LinearSystem& system, SolveMethod method, double tol) {
    SolverOptions o;
    o.method = method;
    o.tol = tol;
    return solve(system, o);
}

/// Process CPU time in seconds.
double cpu_time_now();

}  // namespace sbd

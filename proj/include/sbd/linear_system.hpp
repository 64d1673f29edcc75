#pragma once

/**
 * @file linear_system.hpp
 * @brief Sparse linear system in coordinate form plus the affine row
 *        expressions the assemblers are written in.
 */

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Sparse>

namespace sbd {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using Vector = Eigen::VectorXd;

/// Affine combination sum_k c_k x_{i_k} + constant of global unknowns.
/// Traces, fluxes and ghost values are all built as LinearForms so that a
/// discrete expression is defined once and reused by every row needing it.
class LinearForm {
public:
    LinearForm() = default;
    explicit LinearForm(double constant) : constant_(constant) {}
    static LinearForm unknown(std::size_t index, double coeff = 1.0) {
        LinearForm f;
        f.terms_.emplace_back(index, coeff);
        return f;
    }

    LinearForm& add(std::size_t index, double coeff) {
        terms_.emplace_back(index, coeff);
        return *this;
    }
    LinearForm& operator+=(const LinearForm& o);
    LinearForm& operator-=(const LinearForm& o);
    LinearForm& operator*=(double s);
    LinearForm& operator+=(double c) { constant_ += c; return *this; }
    LinearForm& operator-=(double c) { constant_ -= c; return *this; }

    friend LinearForm operator-(LinearForm a) { return a *= -1.0; }
    friend LinearForm operator+(LinearForm a, const LinearForm& b) { return a += b; }
    friend LinearForm operator-(LinearForm a, const LinearForm& b) { return a -= b; }
    friend LinearForm operator*(LinearForm a, double s) { return a *= s; }
    friend LinearForm operator*(double s, LinearForm a) { return a *= s; }
    friend LinearForm operator/(LinearForm a, double s) { return a *= 1.0 / s; }
    friend LinearForm operator+(LinearForm a, double c) { return a += c; }
    friend LinearForm operator-(LinearForm a, double c) { return a -= c; }

    double constant() const { return constant_; }
    const std::vector<std::pair<std::size_t, double>>& terms() const { return terms_; }

    /// Coefficient of one unknown (duplicates summed).
    double coeff(std::size_t index) const;
    double evaluate(const Vector& x) const;

private:
    std::vector<std::pair<std::size_t, double>> terms_;
    double constant_ = 0.0;
};

class LinearSystem {
public:
    explicit LinearSystem(std::size_t n);

    std::size_t size() const { return n_; }

    /// Sets row `row` to the equation `form == 0`.
    void set_row(std::size_t row, const LinearForm& form);
    /// Adds `form` into an existing row (matrix part and constant).
    void add_to_row(std::size_t row, const LinearForm& form);

    /// Sums duplicates, drops explicit zeros and checks every row has an
    /// entry. Throws std::logic_error on an empty row.
    void finalize();
    bool finalized() const { return finalized_; }

    const SparseMatrix& matrix() const;
    const Vector& rhs() const { return rhs_; }

    /// Rows that were never set (before finalize); used to report gaps in
    /// boundary-condition coverage.
    std::vector<std::size_t> unset_rows() const;

    /// MatrixMarket coordinate format, 17 significant digits.
    void write_matrix_market(std::ostream& os) const;

private:
    std::size_t n_;
    std::vector<Eigen::Triplet<double, int>> triplets_;
    Vector rhs_;
    std::vector<char> touched_;
    SparseMatrix A_;
    bool finalized_ = false;
};

}  // namespace sbd

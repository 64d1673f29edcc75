#include "sbd/linear_system.hpp"

#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace sbd {

LinearForm& LinearForm::operator+=(const LinearForm& o) {
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    constant_ += o.constant_;
    return *this;
}

LinearForm& LinearForm::operator-=(const LinearForm& o) {
    terms_.reserve(terms_.size() + o.terms_.size());
    for (const auto& [i, c] : o.terms_) terms_.emplace_back(i, -c);
    constant_ -= o.constant_;
    return *this;
}

LinearForm& LinearForm::operator*=(double s) {
    for (auto& t : terms_) t.second *= s;
    constant_ *= s;
    return *this;
}

double LinearForm::coeff(std::size_t index) const {
    double c = 0.0;
    for (const auto& [i, v] : terms_)
        if (i == index) c += v;
    return c;
}

double LinearForm::evaluate(const Vector& x) const {
    double s = constant_;
    for (const auto& [i, c] : terms_) s += c * x[static_cast<Eigen::Index>(i)];
    return s;
}

LinearSystem::LinearSystem(std::size_t n) : n_(n), rhs_(Vector::Zero(static_cast<Eigen::Index>(n))), touched_(n, 0) {}

void LinearSystem::set_row(std::size_t row, const LinearForm& form) {
    if (touched_.at(row)) throw std::logic_error("LinearSystem: row " + std::to_string(row) + " set twice");
    touched_[row] = 1;
    add_to_row(row, form);
}

void LinearSystem::add_to_row(std::size_t row, const LinearForm& form) {
    if (finalized_) throw std::logic_error("LinearSystem: already finalized");
    for (const auto& [col, c] : form.terms()) {
        if (col >= n_) throw std::out_of_range("LinearSystem: column out of range");
        triplets_.emplace_back(static_cast<int>(row), static_cast<int>(col), c);
    }
    rhs_[static_cast<Eigen::Index>(row)] -= form.constant();
}

std::vector<std::size_t> LinearSystem::unset_rows() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n_; ++i)
        if (!touched_[i]) out.push_back(i);
    return out;
}

void LinearSystem::finalize() {
    if (finalized_) return;
    const auto n = static_cast<int>(n_);
    A_.resize(n, n);
    A_.setFromTriplets(triplets_.begin(), triplets_.end());
    A_.prune(0.0);
    A_.makeCompressed();
    triplets_.clear();
    triplets_.shrink_to_fit();

    std::vector<char> nonempty(n_, 0);
    for (int k = 0; k < A_.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(A_, k); it; ++it) nonempty[static_cast<std::size_t>(it.row())] = 1;
    for (std::size_t i = 0; i < n_; ++i)
        if (!nonempty[i]) throw std::logic_error("LinearSystem: row " + std::to_string(i) + " is empty");
    finalized_ = true;
}

const SparseMatrix& LinearSystem::matrix() const {
    if (!finalized_) throw std::logic_error("LinearSystem: matrix() before finalize()");
    return A_;
}

void LinearSystem::write_matrix_market(std::ostream& os) const {
    const SparseMatrix& A = matrix();
    os << "%%MatrixMarket matrix coordinate real general\n";
    os << A.rows() << ' ' << A.cols() << ' ' << A.nonZeros() << '\n';
    os << std::setprecision(17);
    for (int k = 0; k < A.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(A, k); it; ++it)
            os << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
}

}  // namespace sbd

#include "proxytally/sparse.hpp"

#include <limits>
#include <stdexcept>

namespace proxytally {

CsrMatrix CsrMatrix::from_triplets(std::size_t rows, std::size_t cols, const std::vector<Triplet> &entries)
{
    constexpr auto limit = static_cast<std::size_t>(std::numeric_limits<Index>::max());
    if (rows > limit || cols > limit)
        throw std::length_error("matrix dimension exceeds the sparse index range");

    std::vector<Eigen::Triplet<double, Index>> list;
    list.reserve(entries.size());
    for (const auto &t : entries) {
        if (t.row >= rows || t.col >= cols)
            throw std::out_of_range("triplet outside matrix bounds");
        list.emplace_back(static_cast<Index>(t.row), static_cast<Index>(t.col), t.value);
    }
    CsrMatrix m;
    m.m_.resize(static_cast<Index>(rows), static_cast<Index>(cols));
    m.m_.setFromTriplets(list.begin(), list.end());
    m.m_.makeCompressed();
    return m;
}

std::size_t CsrMatrix::storage_bytes() const noexcept
{
    return (static_cast<std::size_t>(m_.outerSize()) + 1) * sizeof(Index) +
           static_cast<std::size_t>(m_.data().allocatedSize()) * (sizeof(Index) + sizeof(double));
}

double CsrMatrix::at(std::size_t row, std::size_t col) const
{
    if (row >= rows() || col >= cols())
        throw std::out_of_range("matrix index out of range");
    return m_.coeff(static_cast<Index>(row), static_cast<Index>(col));
}

std::span<const CsrMatrix::Index> CsrMatrix::row_columns(std::size_t row) const
{
    if (row >= rows())
        throw std::out_of_range("row index out of range");
    const auto begin = m_.outerIndexPtr()[row];
    const auto end = m_.outerIndexPtr()[row + 1];
    return {m_.innerIndexPtr() + begin, static_cast<std::size_t>(end - begin)};
}

std::span<const double> CsrMatrix::row_values(std::size_t row) const
{
    if (row >= rows())
        throw std::out_of_range("row index out of range");
    const auto begin = m_.outerIndexPtr()[row];
    const auto end = m_.outerIndexPtr()[row + 1];
    return {m_.valuePtr() + begin, static_cast<std::size_t>(end - begin)};
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const
{
    if (x.size() != cols() || y.size() != rows())
        throw std::invalid_argument("dimension mismatch in sparse product");
    Eigen::Map<const Eigen::VectorXd> in(x.data(), static_cast<Eigen::Index>(x.size()));
    Eigen::Map<Eigen::VectorXd> out(y.data(), static_cast<Eigen::Index>(y.size()));
    out.noalias() = m_ * in;
}

CsrMatrix CsrMatrix::transpose() const
{
    CsrMatrix t;
    t.m_ = Storage(m_.transpose());
    t.m_.makeCompressed();
    return t;
}

} // namespace proxytally

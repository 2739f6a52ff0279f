#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/SparseCore>

namespace proxytally {

struct Triplet {
    std::uint32_t row = 0;
    std::uint32_t col = 0;
    double value = 0.0;
};

/// Compressed sparse row matrix backed by Eigen. Storage and products are
/// O(rows + nnz).
class CsrMatrix {
public:
    using Index = std::int32_t;
    using Storage = Eigen::SparseMatrix<double, Eigen::RowMajor, Index>;

    CsrMatrix() = default;

    /// Duplicate (row, col) entries are summed.
    static CsrMatrix from_triplets(std::size_t rows, std::size_t cols, const std::vector<Triplet> &entries);

    std::size_t rows() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    std::size_t cols() const noexcept { return static_cast<std::size_t>(m_.cols()); }
    std::size_t nnz() const noexcept { return static_cast<std::size_t>(m_.nonZeros()); }
    std::size_t storage_bytes() const noexcept;

    /// Entry (row, col), zero when not stored.
    double at(std::size_t row, std::size_t col) const;

    std::span<const Index> row_columns(std::size_t row) const;
    std::span<const double> row_values(std::size_t row) const;

    /// y = M x, accumulated row by row in column order.
    void multiply(std::span<const double> x, std::span<double> y) const;

    CsrMatrix transpose() const;

    const Storage &eigen() const noexcept { return m_; }

private:
    Storage m_;
};

} // namespace proxytally

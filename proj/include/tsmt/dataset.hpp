#ifndef TSMT_DATASET_HPP
#define TSMT_DATASET_HPP

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tsmt/error.hpp"

namespace tsmt {

/// m samples (rows) by n observations (columns), row-major.
class Dataset {
public:
    Dataset() = default;

    Dataset(std::size_t m, std::size_t n) : m_(m), n_(n), values_(m * n, 0.0) {}

    Dataset(std::size_t m, std::size_t n, std::vector<double> values)
        : m_(m), n_(n), values_(std::move(values))
    {
        if (values_.size() != m_ * n_) {
            throw config_error("Dataset: expected " + std::to_string(m_ * n_) + " values, got " +
                               std::to_string(values_.size()));
        }
    }

    static Dataset from_rows(const std::vector<std::vector<double>>& rows)
    {
        if (rows.empty()) return {};
        const std::size_t n = rows.front().size();
        std::vector<double> flat;
        flat.reserve(rows.size() * n);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != n) {
                throw config_error("Dataset: row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                                   " values, expected " + std::to_string(n));
            }
            flat.insert(flat.end(), rows[i].begin(), rows[i].end());
        }
        return Dataset(rows.size(), n, std::move(flat));
    }

    std::size_t rows() const { return m_; }
    std::size_t cols() const { return n_; }
    bool empty() const { return m_ == 0; }

    std::span<const double> row(std::size_t i) const { return {values_.data() + i * n_, n_}; }
    std::span<double> row(std::size_t i) { return {values_.data() + i * n_, n_}; }

    double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return values_[i * n_ + j]; }

    /// Columns [first, first + count) of every row.
    Dataset column_slice(std::size_t first, std::size_t count) const
    {
        if (first + count > n_) throw config_error("Dataset::column_slice out of range");
        Dataset out(m_, count);
        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t j = 0; j < count; ++j) out(i, j) = (*this)(i, first + j);
        }
        return out;
    }

    const std::vector<double>& values() const { return values_; }

private:
    std::size_t m_ = 0;
    std::size_t n_ = 0;
    std::vector<double> values_;
};

}  // namespace tsmt

#endif  // TSMT_DATASET_HPP

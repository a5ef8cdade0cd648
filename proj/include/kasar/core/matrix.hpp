#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace kasar {

using cplx = std::complex<double>;

/// Dense row-major matrix. Rows are contiguous so per-row passes can take spans.
template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }
    std::vector<T>& storage() { return data_; }
    const std::vector<T>& storage() const { return data_; }

    auto begin() { return data_.begin(); }
    auto end() { return data_.end(); }
    auto begin() const { return data_.begin(); }
    auto end() const { return data_.end(); }

    template <typename U>
    bool same_shape(const Matrix<U>& other) const {
        return rows_ == other.rows() && cols_ == other.cols();
    }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using ComplexMatrix = Matrix<cplx>;
using RealMatrix = Matrix<double>;
/// 1 = valid / covered, 0 = masked.
using Mask = Matrix<std::uint8_t>;

/// Uniformly sampled axis anchored at its middle sample:
/// value(i) = center + (i - size/2) * step, so value(size/2) == center exactly.
struct UniformAxis {
    double center = 0.0;
    double step = 1.0;
    std::size_t size = 0;

    std::size_t center_index() const { return size / 2; }
    double value(std::size_t i) const {
        return center + (static_cast<double>(i) - static_cast<double>(size / 2)) * step;
    }
    double front() const { return value(0); }
    double back() const { return value(size - 1); }
    /// size * step; the reciprocal-domain sample spacing is 2*pi / span().
    double span() const { return static_cast<double>(size) * step; }
    /// Fractional index of x (not clamped).
    double index_of(double x) const {
        return (x - center) / step + static_cast<double>(size / 2);
    }
    std::vector<double> values() const {
        std::vector<double> v(size);
        for (std::size_t i = 0; i < size; ++i) v[i] = value(i);
        return v;
    }
    bool operator==(const UniformAxis&) const = default;
};

inline std::size_t count_valid(const Mask& m) {
    std::size_t n = 0;
    for (auto v : m) n += v != 0;
    return n;
}

}  // namespace kasar

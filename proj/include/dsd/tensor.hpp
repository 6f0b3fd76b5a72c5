#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dsd/error.hpp"

namespace dsd {

/// Dense n-dimensional array of doubles, flat row-major storage.
/// Rank 1 (vectors) and rank 2 (matrices) are the only shapes the engine uses.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> shape);  // zero-filled
    Tensor(std::vector<std::size_t> shape, std::vector<double> data);

    static Tensor zeros(std::vector<std::size_t> shape) { return Tensor(std::move(shape)); }
    static Tensor full(std::vector<std::size_t> shape, double value);

    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t rank() const { return shape_.size(); }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    // 2-d helpers; rank-1 tensors behave as a single row.
    std::size_t rows() const { return rank() == 2 ? shape_[0] : 1; }
    std::size_t cols() const { return rank() == 2 ? shape_[1] : (rank() == 1 ? shape_[0] : 0); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& values() { return data_; }
    const std::vector<double>& values() const { return data_; }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }
    double& at(std::size_t r, std::size_t c) { return data_[r * shape_[1] + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * shape_[1] + c]; }

    bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
    bool all_finite() const;

private:
    std::vector<std::size_t> shape_;
    std::vector<double> data_;
};

/// "[3x4]" -- used in error messages.
std::string shape_str(const Tensor& t);

// ---------------------------------------------------------------------------
// Plain (untraced) kernels. The autodiff tape calls exactly these for values,
// so traced and untraced evaluation are bit-identical.
// ---------------------------------------------------------------------------

Tensor matmul(const Tensor& a, const Tensor& b);     // [m×k]·[k×n]
Tensor matmul_nt(const Tensor& a, const Tensor& b);  // a · bᵀ
Tensor matmul_tn(const Tensor& a, const Tensor& b);  // aᵀ · b

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);  // Hadamard
Tensor relu(const Tensor& a);
Tensor sigmoid(const Tensor& a);
Tensor tanh(const Tensor& a);

/// [m×n] matrix plus a length-n row vector, broadcast over rows.
Tensor add_bias(const Tensor& m, const Tensor& bias);

double sum(const Tensor& a);
Tensor transpose(const Tensor& a);

/// Column sums of an [m×n] matrix, as a length-n tensor.
Tensor col_sum(const Tensor& a);

enum class EwOp { add, sub, mul, relu, sigmoid, tanh };

/// Enum-dispatched elementwise op; `b` must be non-null for binary kinds.
Tensor elementwise(EwOp op, const Tensor& a, const Tensor* b = nullptr);

}  // namespace dsd

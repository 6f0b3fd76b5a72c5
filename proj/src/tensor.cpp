#include "dsd/tensor.hpp"

#include <Eigen/Core>

#include <cmath>
#include <numeric>
#include <utility>

namespace dsd {

namespace {

using EigenRowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const EigenRowMat>;
using MutMap = Eigen::Map<EigenRowMat>;

std::size_t shape_product(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    return shape.empty() ? 0 : n;
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
    if (!a.same_shape(b)) {
        throw ShapeError(std::string(op) + ": operand shapes differ: " + shape_str(a) + " vs " +
                         shape_str(b));
    }
}

template <class F>
Tensor map_unary(const Tensor& a, F f) {
    Tensor out(a.shape());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = f(a[i]);
    return out;
}

template <class F>
Tensor map_binary(const Tensor& a, const Tensor& b, const char* name, F f) {
    require_same_shape(a, b, name);
    Tensor out(a.shape());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = f(a[i], b[i]);
    return out;
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape)
    : shape_(std::move(shape)), data_(shape_product(shape_), 0.0) {
    for (std::size_t d : shape_) {
        if (d == 0) throw ShapeError("tensor dimensions must be positive");
    }
}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    for (std::size_t d : shape_) {
        if (d == 0) throw ShapeError("tensor dimensions must be positive");
    }
    if (shape_product(shape_) != data_.size()) {
        throw ShapeError("tensor data length does not match shape product");
    }
}

Tensor Tensor::full(std::vector<std::size_t> shape, double value) {
    Tensor t(std::move(shape));
    for (auto& v : t.data_) v = value;
    return t;
}

bool Tensor::all_finite() const {
    for (double v : data_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

std::string shape_str(const Tensor& t) {
    std::string s = "[";
    for (std::size_t i = 0; i < t.shape().size(); ++i) {
        if (i) s += "x";
        s += std::to_string(t.shape()[i]);
    }
    return s + "]";
}

Tensor matmul(const Tensor& a, const Tensor& b) {
    if (a.rank() != 2 || b.rank() != 2 || a.cols() != b.rows()) {
        throw ShapeError("matmul: inner dimensions disagree: " + shape_str(a) + " x " +
                         shape_str(b));
    }
    Tensor out({a.rows(), b.cols()});
    ConstMap am(a.data(), static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols()));
    ConstMap bm(b.data(), static_cast<Eigen::Index>(b.rows()), static_cast<Eigen::Index>(b.cols()));
    MutMap om(out.data(), static_cast<Eigen::Index>(out.rows()),
              static_cast<Eigen::Index>(out.cols()));
    om.noalias() = am * bm;
    return out;
}

Tensor matmul_nt(const Tensor& a, const Tensor& b) {
    if (a.rank() != 2 || b.rank() != 2 || a.cols() != b.cols()) {
        throw ShapeError("matmul_nt: inner dimensions disagree: " + shape_str(a) + " x " +
                         shape_str(b) + "^T");
    }
    Tensor out({a.rows(), b.rows()});
    ConstMap am(a.data(), static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols()));
    ConstMap bm(b.data(), static_cast<Eigen::Index>(b.rows()), static_cast<Eigen::Index>(b.cols()));
    MutMap om(out.data(), static_cast<Eigen::Index>(out.rows()),
              static_cast<Eigen::Index>(out.cols()));
    om.noalias() = am * bm.transpose();
    return out;
}

Tensor matmul_tn(const Tensor& a, const Tensor& b) {
    if (a.rank() != 2 || b.rank() != 2 || a.rows() != b.rows()) {
        throw ShapeError("matmul_tn: inner dimensions disagree: " + shape_str(a) + "^T x " +
                         shape_str(b));
    }
    Tensor out({a.cols(), b.cols()});
    ConstMap am(a.data(), static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols()));
    ConstMap bm(b.data(), static_cast<Eigen::Index>(b.rows()), static_cast<Eigen::Index>(b.cols()));
    MutMap om(out.data(), static_cast<Eigen::Index>(out.rows()),
              static_cast<Eigen::Index>(out.cols()));
    om.noalias() = am.transpose() * bm;
    return out;
}

Tensor add(const Tensor& a, const Tensor& b) {
    return map_binary(a, b, "add", [](double x, double y) { return x + y; });
}

Tensor sub(const Tensor& a, const Tensor& b) {
    return map_binary(a, b, "sub", [](double x, double y) { return x - y; });
}

Tensor mul(const Tensor& a, const Tensor& b) {
    return map_binary(a, b, "mul", [](double x, double y) { return x * y; });
}

Tensor relu(const Tensor& a) {
    return map_unary(a, [](double x) { return x > 0.0 ? x : 0.0; });
}

Tensor sigmoid(const Tensor& a) {
    return map_unary(a, [](double x) { return 1.0 / (1.0 + std::exp(-x)); });
}

Tensor tanh(const Tensor& a) {
    return map_unary(a, [](double x) { return std::tanh(x); });
}

Tensor add_bias(const Tensor& m, const Tensor& bias) {
    if (m.rank() != 2 || bias.rank() != 1 || bias.size() != m.cols()) {
        throw ShapeError("add_bias: " + shape_str(m) + " + " + shape_str(bias));
    }
    Tensor out(m.shape());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            out.at(r, c) = m.at(r, c) + bias[c];
        }
    }
    return out;
}

double sum(const Tensor& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i];
    return s;
}

Tensor transpose(const Tensor& a) {
    if (a.rank() != 2) throw ShapeError("transpose: rank-2 tensor required, got " + shape_str(a));
    Tensor out({a.cols(), a.rows()});
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) {
            out.at(c, r) = a.at(r, c);
        }
    }
    return out;
}

Tensor col_sum(const Tensor& a) {
    if (a.rank() != 2) throw ShapeError("col_sum: rank-2 tensor required, got " + shape_str(a));
    Tensor out({a.cols()});
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) {
            out[c] += a.at(r, c);
        }
    }
    return out;
}

Tensor elementwise(EwOp op, const Tensor& a, const Tensor* b) {
    switch (op) {
        case EwOp::add:
        case EwOp::sub:
        case EwOp::mul:
            if (b == nullptr) throw ContractError("elementwise: binary op requires two operands");
            break;
        default:
            break;
    }
    switch (op) {
        case EwOp::add: return add(a, *b);
        case EwOp::sub: return sub(a, *b);
        case EwOp::mul: return mul(a, *b);
        case EwOp::relu: return relu(a);
        case EwOp::sigmoid: return sigmoid(a);
        case EwOp::tanh: return tanh(a);
    }
    throw ContractError("elementwise: unknown op");
}

}  // namespace dsd

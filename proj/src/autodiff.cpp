#include "dsd/autodiff.hpp"

#include <cmath>
#include <utility>

namespace dsd {

const Tensor& Var::value() const { return tape->value(*this); }
const Tensor& Var::grad() const { return tape->grad(*this); }

Var Tape::push(Tensor value, std::function<void()> back) {
    nodes_.push_back(Node{std::move(value), Tensor{}, std::move(back)});
    return Var{this, nodes_.size() - 1};
}

Var Tape::leaf(Tensor value) { return push(std::move(value), nullptr); }

Var Tape::matmul(Var a, Var b) {
    Tensor v = dsd::matmul(a.value(), b.value());
    std::size_t out = nodes_.size();
    return push(std::move(v), [this, a, b, out]() {
        const Tensor& g = nodes_[out].grad;
        // dA = g · Bᵀ, dB = Aᵀ · g
        Tensor da = matmul_nt(g, nodes_[b.id].value);
        Tensor db = matmul_tn(nodes_[a.id].value, g);
        Tensor& ga = nodes_[a.id].grad;
        Tensor& gb = nodes_[b.id].grad;
        for (std::size_t i = 0; i < da.size(); ++i) ga[i] += da[i];
        for (std::size_t i = 0; i < db.size(); ++i) gb[i] += db[i];
    });
}

Var Tape::add(Var a, Var b) {
    Tensor v = dsd::add(a.value(), b.value());
    std::size_t out = nodes_.size();
    return push(std::move(v), [this, a, b, out]() {
        const Tensor& g = nodes_[out].grad;
        Tensor& ga = nodes_[a.id].grad;
        Tensor& gb = nodes_[b.id].grad;
        for (std::size_t i = 0; i < g.size(); ++i) {
            ga[i] += g[i];
            gb[i] += g[i];
        }
    });
}

Var Tape::sub(Var a, Var b) {
    Tensor v = dsd::sub(a.value(), b.value());
    std::size_t out = nodes_.size();
    return push(std::move(v), [this, a, b, out]() {
        const Tensor& g = nodes_[out].grad;
        Tensor& ga = nodes_[a.id].grad;
        Tensor& gb = nodes_[b.id].grad;
        for (std::size_t i = 0; i < g.size(); ++i) {
            ga[i] += g[i];
            gb[i] -= g[i];
        }
    });
}

Var Tape::mul(Var a, Var b) {
    Tensor v = dsd::mul(a.value(), b.value());
    std::size_t out = nodes_.size();
    return push(std::move(v), [this, a, b, out]() {
        const Tensor& g = nodes_[out].grad;
        const Tensor& av = nodes_[a.id].value;
        const Tensor& bv = nodes_[b.id].value;
        Tensor& ga = nodes_[a.id].grad;
        Tensor& gb = nodes_[b.id].grad;
        for (std::size_t i = 0; i < g.size(); ++i) {
            ga[i] += g[i] * bv[i];
            gb[i] += g[i] * av[i];
        }
    });
}

Var Tape::relu(Var a) {
    Tensor v = dsd::relu(a.value());
    std::size_t out = nodes_.size();
    // Subgradient at exactly 0 is 0.
    return push(std::move(v), [this, a, out]() {
        const Tensor& g = nodes_[out].grad;
        const Tensor& av = nodes_[a.id].value;
        Tensor& ga = nodes_[a.id].grad;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (av[i] > 0.0) ga[i] += g[i];
        }
    });
}

Var Tape::sigmoid(Var a) {
    Tensor v = dsd::sigmoid(a.value());
    std::size_t out = nodes_.size();
    return push(std::move(v), [this, a, out]() {
        const Tensor& g = nodes_[out].grad;
        const Tensor& ov = nodes_[out].value;
        Tensor& ga = nodes_[a.id].grad;
        for (std::size_t i = 0; i < g.size(); ++i) {
            ga[i] += g[i] * ov[i] * (1.0 - ov[i]);
        }
    });
}

Var Tape::tanh(Var a) {
    Tensor v = dsd::tanh(a.value());
    std::size_t out = nodes_.size();
    return push(std::move(v), [this, a, out]() {
        const Tensor& g = nodes_[out].grad;
        const Tensor& ov = nodes_[out].value;
        Tensor& ga = nodes_[a.id].grad;
        for (std::size_t i = 0; i < g.size(); ++i) {
            ga[i] += g[i] * (1.0 - ov[i] * ov[i]);
        }
    });
}

Var Tape::add_bias(Var m, Var bias) {
    Tensor v = dsd::add_bias(m.value(), bias.value());
    std::size_t out = nodes_.size();
    return push(std::move(v), [this, m, bias, out]() {
        const Tensor& g = nodes_[out].grad;
        Tensor& gm = nodes_[m.id].grad;
        Tensor& gb = nodes_[bias.id].grad;
        const std::size_t rows = g.rows(), cols = g.cols();
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < cols; ++c) {
                gm.at(r, c) += g.at(r, c);
                gb[c] += g.at(r, c);
            }
        }
    });
}

Var Tape::sum(Var a) {
    Tensor v({1}, {dsd::sum(a.value())});
    std::size_t out = nodes_.size();
    return push(std::move(v), [this, a, out]() {
        const double g = nodes_[out].grad[0];
        Tensor& ga = nodes_[a.id].grad;
        for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += g;
    });
}

Var Tape::softmax_cross_entropy(Var logits, const std::vector<int>& labels) {
    const Tensor& z = logits.value();
    if (z.rank() != 2 || labels.size() != z.rows()) {
        throw ShapeError("softmax_cross_entropy: logits " + shape_str(z) + " vs " +
                         std::to_string(labels.size()) + " labels");
    }
    const std::size_t m = z.rows(), c = z.cols();
    for (int lab : labels) {
        if (lab < 0 || static_cast<std::size_t>(lab) >= c) {
            throw DataError("softmax_cross_entropy: label " + std::to_string(lab) +
                            " out of range for " + std::to_string(c) + " classes");
        }
    }

    Tensor softmax({m, c});
    double total = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
        double zmax = z.at(r, 0);
        for (std::size_t j = 1; j < c; ++j) zmax = std::max(zmax, z.at(r, j));
        double denom = 0.0;
        for (std::size_t j = 0; j < c; ++j) denom += std::exp(z.at(r, j) - zmax);
        const double lse = zmax + std::log(denom);
        for (std::size_t j = 0; j < c; ++j) softmax.at(r, j) = std::exp(z.at(r, j) - lse);
        total += lse - z.at(r, static_cast<std::size_t>(labels[r]));
    }

    Tensor v({1}, {total / static_cast<double>(m)});
    std::size_t out = nodes_.size();
    return push(std::move(v),
                [this, logits, out, sm = std::move(softmax), labels]() {
                    const double g = nodes_[out].grad[0];
                    Tensor& gl = nodes_[logits.id].grad;
                    const std::size_t m2 = sm.rows(), c2 = sm.cols();
                    const double scale = g / static_cast<double>(m2);
                    for (std::size_t r = 0; r < m2; ++r) {
                        const auto lab = static_cast<std::size_t>(labels[r]);
                        for (std::size_t j = 0; j < c2; ++j) {
                            const double onehot = (j == lab) ? 1.0 : 0.0;
                            gl.at(r, j) += scale * (sm.at(r, j) - onehot);
                        }
                    }
                });
}

void Tape::backward(Var loss) {
    if (loss.tape != this || loss.id >= nodes_.size()) {
        throw ContractError("backward: loss does not belong to this tape");
    }
    if (nodes_[loss.id].value.size() != 1) {
        throw ContractError("backward: loss must be scalar, got " +
                            shape_str(nodes_[loss.id].value));
    }
    for (auto& n : nodes_) n.grad = Tensor(n.value.shape());
    nodes_[loss.id].grad[0] = 1.0;
    // Creation order is topological; nodes after `loss` cannot be ancestors.
    for (std::size_t i = loss.id + 1; i-- > 0;) {
        if (nodes_[i].back) nodes_[i].back();
    }
}

}  // namespace dsd

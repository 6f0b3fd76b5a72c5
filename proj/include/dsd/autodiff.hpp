#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "dsd/tensor.hpp"

namespace dsd {

class Tape;

/// Handle to a node on a tape. Cheap to copy; valid as long as the tape lives.
struct Var {
    Tape* tape = nullptr;
    std::size_t id = 0;

    const Tensor& value() const;
    const Tensor& grad() const;
};

/// Reverse-mode gradient tape. Nodes are recorded in evaluation order, which
/// is a topological order of the computation graph; backward() walks it once
/// in reverse. A tape belongs to a single training run.
///
/// Value computation delegates to the plain kernels in tensor.hpp, so a traced
/// forward pass produces bit-identical values to an untraced one.
class Tape {
public:
    Tape() = default;
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    /// Record an input tensor (weights, bias, minibatch, constant mask).
    Var leaf(Tensor value);

    Var matmul(Var a, Var b);
    Var add(Var a, Var b);
    Var sub(Var a, Var b);
    Var mul(Var a, Var b);
    Var relu(Var a);
    Var sigmoid(Var a);
    Var tanh(Var a);
    Var add_bias(Var m, Var bias);
    Var sum(Var a);

    /// Mean negative log-likelihood over the batch, max-stabilized.
    /// `labels[i]` must be in [0, logits.cols()). Fused forward+backward rule.
    Var softmax_cross_entropy(Var logits, const std::vector<int>& labels);

    /// Seed d(loss)/d(loss) = 1 and accumulate gradients for every node that
    /// `loss` depends on. `loss` must be scalar (ContractError otherwise).
    void backward(Var loss);

    const Tensor& value(Var v) const { return nodes_[v.id].value; }
    const Tensor& grad(Var v) const { return nodes_[v.id].grad; }
    std::size_t node_count() const { return nodes_.size(); }

private:
    struct Node {
        Tensor value;
        Tensor grad;  // allocated by backward(); same shape as value
        std::function<void()> back;  // accumulates this node's grad into its parents'
    };

    Var push(Tensor value, std::function<void()> back);

    std::vector<Node> nodes_;

    friend struct Var;
};

}  // namespace dsd

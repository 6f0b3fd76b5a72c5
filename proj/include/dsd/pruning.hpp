#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dsd/data.hpp"
#include "dsd/tensor.hpp"

namespace dsd {

struct Network;

/// Binary mask congruent to a weight tensor; 1.0 = kept, 0.0 = pruned.
struct PruneMask {
    Tensor bits;
    std::size_t kept_count = 0;
    std::string layer_name;
};

struct SparsitySpec {
    double sparsity = 0.0;  // in [0, 1)
    std::vector<std::string> excluded_layers;
};

/// Number of weights pruned at `sparsity`: floor(N*sparsity), rounded down so
/// we never prune more than requested. A small nudge counters binary
/// representation error of decimal sparsities (10 weights at 0.3 prune 3).
std::size_t pruned_count(std::size_t n, double sparsity);

struct ThresholdResult {
    double lambda = 0.0;  // k-th largest |w|; the smallest kept magnitude
    PruneMask mask;
};

/// Keep exactly the top-k weights by |w| with k = N - floor(N*sparsity).
/// Ties at the boundary keep the lower flat index.
ThresholdResult threshold(const Tensor& weights, double sparsity, std::string layer_name = "");

/// Masked coordinates are set to exactly 0.0 (never -0.0 or merely small).
Tensor apply_mask(const Tensor& weights, const PruneMask& mask);
void apply_mask_in_place(Tensor& weights, const PruneMask& mask);

/// Pruning score from the loss expansion at a local minimum: |w|.
/// Ascending score order is the pruning order.
double taylor_delta(double w);

/// loss(W with w[index] := 0) - loss(W) on `data`, by two full forward
/// passes over the dataset. The network is restored before returning.
/// `layer` indexes the network's layer list; `index` is a flat weight index.
double true_loss_delta(Network& net, const Dataset& data, std::size_t layer, std::size_t index);

}  // namespace dsd

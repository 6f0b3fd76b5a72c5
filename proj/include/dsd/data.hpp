#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "dsd/tensor.hpp"

namespace dsd {

/// Immutable labeled dataset. Features are [n × d] with values in [0, 1].
struct Dataset {
    Tensor features;
    std::vector<int> labels;
    int class_count = 0;

    std::size_t size() const { return labels.size(); }
    std::size_t dim() const { return features.cols(); }
};

/// splitmix64 — used everywhere a derived seed is needed so that every random
/// stream is a pure function of (config seed, purpose, indices).
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

// ---------------------------------------------------------------------------
// IDX container (big-endian): images magic 0x00000803 with dims
// (count, rows, cols); labels magic 0x00000801 with dim (count).
// Pixel bytes are scaled by 1/255 on load.
// ---------------------------------------------------------------------------

Dataset load_idx(const std::filesystem::path& images_path,
                 const std::filesystem::path& labels_path);

/// Writes a dataset as an IDX image/label pair. rows*cols must equal dim();
/// feature values are quantized to bytes with round(v*255).
void save_idx(const Dataset& ds, const std::filesystem::path& images_path,
              const std::filesystem::path& labels_path, std::size_t rows, std::size_t cols);

/// CSV export, one line per example: label,f1,...,fd
void export_csv(const Dataset& ds, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Synthetic datasets
// ---------------------------------------------------------------------------

enum class SyntheticKind { two_gaussians, concentric_rings };

/// Deterministic 2-d two-class dataset, classes balanced to ±1 example.
Dataset make_synthetic(SyntheticKind kind, std::size_t n, double noise_std, std::uint64_t seed);

/// Deterministic image-classification stand-in: `class_count` smoothed random
/// prototype images on a side×side grid; each example is a randomly shifted,
/// amplitude-jittered, noisy copy of its class prototype. Balanced classes.
Dataset make_image_classes(std::size_t n, int class_count, std::size_t side, double noise_std,
                           std::uint64_t seed);

// ---------------------------------------------------------------------------
// Splitting and batching
// ---------------------------------------------------------------------------

struct SplitFractions {
    double train = 0.8;
    double val = 0.1;
    double test = 0.1;
};

struct Split {
    Dataset train;
    Dataset val;
    Dataset test;
};

/// Disjoint, exhaustive, deterministic split. Fractions must be positive and
/// sum to 1 within 1e-9. Sizes are floor(n*f) except the last part, which
/// takes the remainder.
Split split(const Dataset& ds, const SplitFractions& fractions, std::uint64_t seed);

struct BatchPlan {
    std::size_t batch_size = 64;
    std::uint64_t shuffle_seed = 0;
    bool drop_last = false;
};

/// Minibatch index order for one epoch. Reshuffled per epoch, keyed by
/// (shuffle_seed, epoch); every example appears exactly once per epoch when
/// drop_last is false.
std::vector<std::vector<std::size_t>> batches(const Dataset& ds, const BatchPlan& plan, int epoch);

/// Materialize the rows `indices` of `ds` as a (features, labels) pair.
std::pair<Tensor, std::vector<int>> gather(const Dataset& ds,
                                           const std::vector<std::size_t>& indices);

}  // namespace dsd

#include "dsd/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <string>

#include "dsd/error.hpp"

namespace dsd {

namespace {

constexpr std::uint32_t kImagesMagic = 0x00000803;
constexpr std::uint32_t kLabelsMagic = 0x00000801;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint32_t read_u32_be(std::istream& in, const char* field) {
    unsigned char buf[4];
    if (!in.read(reinterpret_cast<char*>(buf), 4)) {
        throw FormatError(std::string("idx: truncated while reading ") + field);
    }
    return (std::uint32_t(buf[0]) << 24) | (std::uint32_t(buf[1]) << 16) |
           (std::uint32_t(buf[2]) << 8) | std::uint32_t(buf[3]);
}

void write_u32_be(std::ostream& out, std::uint32_t v) {
    unsigned char buf[4] = {static_cast<unsigned char>(v >> 24),
                            static_cast<unsigned char>(v >> 16),
                            static_cast<unsigned char>(v >> 8), static_cast<unsigned char>(v)};
    out.write(reinterpret_cast<const char*>(buf), 4);
}

Dataset take_rows(const Dataset& ds, const std::vector<std::size_t>& idx) {
    Dataset out;
    out.class_count = ds.class_count;
    out.labels.reserve(idx.size());
    const std::size_t d = ds.dim();
    Tensor feats({std::max<std::size_t>(idx.size(), 1), d});
    if (idx.empty()) {
        // Represent an empty part as 0 examples with a 1-row placeholder never used.
        out.features = Tensor({1, d});
        out.labels.clear();
        return out;
    }
    for (std::size_t r = 0; r < idx.size(); ++r) {
        const double* src = ds.features.data() + idx[r] * d;
        std::copy(src, src + d, feats.data() + r * d);
        out.labels.push_back(ds.labels[idx[r]]);
    }
    out.features = std::move(feats);
    return out;
}

// 3x3 box blur with zero padding, applied in place.
void box_blur(std::vector<double>& img, std::size_t side) {
    std::vector<double> out(img.size(), 0.0);
    for (std::size_t y = 0; y < side; ++y) {
        for (std::size_t x = 0; x < side; ++x) {
            double acc = 0.0;
            int cnt = 0;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const std::int64_t yy = std::int64_t(y) + dy, xx = std::int64_t(x) + dx;
                    if (yy < 0 || xx < 0 || yy >= std::int64_t(side) || xx >= std::int64_t(side))
                        continue;
                    acc += img[std::size_t(yy) * side + std::size_t(xx)];
                    ++cnt;
                }
            }
            out[y * side + x] = acc / cnt;
        }
    }
    img = std::move(out);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return splitmix64(splitmix64(splitmix64(a) ^ b) ^ c);
}

Dataset load_idx(const std::filesystem::path& images_path,
                 const std::filesystem::path& labels_path) {
    std::ifstream img(images_path, std::ios::binary);
    if (!img) throw FormatError("idx: cannot open images file " + images_path.string());
    std::ifstream lab(labels_path, std::ios::binary);
    if (!lab) throw FormatError("idx: cannot open labels file " + labels_path.string());

    const std::uint32_t img_magic = read_u32_be(img, "images magic");
    if (img_magic != kImagesMagic) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "idx: bad images magic 0x%08x", img_magic);
        throw FormatError(buf);
    }
    const std::uint32_t count = read_u32_be(img, "image count");
    const std::uint32_t rows = read_u32_be(img, "image rows");
    const std::uint32_t cols = read_u32_be(img, "image cols");

    const std::uint32_t lab_magic = read_u32_be(lab, "labels magic");
    if (lab_magic != kLabelsMagic) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "idx: bad labels magic 0x%08x", lab_magic);
        throw FormatError(buf);
    }
    const std::uint32_t lab_count = read_u32_be(lab, "label count");
    if (lab_count != count) {
        throw FormatError("idx: image count " + std::to_string(count) + " != label count " +
                          std::to_string(lab_count));
    }
    if (count == 0) throw DataError("idx: dataset is empty");

    const std::size_t d = std::size_t(rows) * cols;
    std::vector<unsigned char> pixels(std::size_t(count) * d);
    if (!img.read(reinterpret_cast<char*>(pixels.data()),
                  static_cast<std::streamsize>(pixels.size()))) {
        throw FormatError("idx: truncated image payload");
    }
    std::vector<unsigned char> raw_labels(count);
    if (!lab.read(reinterpret_cast<char*>(raw_labels.data()), count)) {
        throw FormatError("idx: truncated label payload");
    }

    Dataset ds;
    ds.features = Tensor({count, d});
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        ds.features[i] = pixels[i] / 255.0;
    }
    ds.labels.assign(raw_labels.begin(), raw_labels.end());
    int max_label = 0;
    for (int l : ds.labels) max_label = std::max(max_label, l);
    ds.class_count = max_label + 1;
    return ds;
}

void save_idx(const Dataset& ds, const std::filesystem::path& images_path,
              const std::filesystem::path& labels_path, std::size_t rows, std::size_t cols) {
    if (rows * cols != ds.dim()) {
        throw ContractError("save_idx: rows*cols != feature dim");
    }
    std::ofstream img(images_path, std::ios::binary);
    if (!img) throw FormatError("idx: cannot write " + images_path.string());
    write_u32_be(img, kImagesMagic);
    write_u32_be(img, static_cast<std::uint32_t>(ds.size()));
    write_u32_be(img, static_cast<std::uint32_t>(rows));
    write_u32_be(img, static_cast<std::uint32_t>(cols));
    std::vector<unsigned char> pixels(ds.features.size());
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        const double v = std::clamp(ds.features[i], 0.0, 1.0);
        pixels[i] = static_cast<unsigned char>(std::lround(v * 255.0));
    }
    img.write(reinterpret_cast<const char*>(pixels.data()),
              static_cast<std::streamsize>(pixels.size()));

    std::ofstream lab(labels_path, std::ios::binary);
    if (!lab) throw FormatError("idx: cannot write " + labels_path.string());
    write_u32_be(lab, kLabelsMagic);
    write_u32_be(lab, static_cast<std::uint32_t>(ds.size()));
    for (int l : ds.labels) {
        const auto b = static_cast<unsigned char>(l);
        lab.write(reinterpret_cast<const char*>(&b), 1);
    }
}

void export_csv(const Dataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw FormatError("csv: cannot write " + path.string());
    const std::size_t d = ds.dim();
    for (std::size_t i = 0; i < ds.size(); ++i) {
        out << ds.labels[i];
        for (std::size_t j = 0; j < d; ++j) {
            char buf[32];
            std::snprintf(buf, sizeof buf, ",%.17g", ds.features[i * d + j]);
            out << buf;
        }
        out << "\n";
    }
}

Dataset make_synthetic(SyntheticKind kind, std::size_t n, double noise_std, std::uint64_t seed) {
    if (n < 2) throw ContractError("make_synthetic: n must be >= 2");
    if (noise_std < 0) throw ContractError("make_synthetic: noise_std must be >= 0");
    std::mt19937_64 rng(mix_seed(seed, 0x5d47a));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    Dataset ds;
    ds.class_count = 2;
    ds.features = Tensor({n, 2});
    ds.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int cls = static_cast<int>(i % 2);  // balanced to ±1 example
        double x, y;
        if (kind == SyntheticKind::two_gaussians) {
            const double cx = cls == 0 ? 0.3 : 0.7;
            x = cx + noise_std * gauss(rng);
            y = cx + noise_std * gauss(rng);
        } else {
            const double radius = cls == 0 ? 0.18 : 0.38;
            const double theta = 2.0 * M_PI * unif(rng);
            x = 0.5 + (radius + noise_std * gauss(rng)) * std::cos(theta);
            y = 0.5 + (radius + noise_std * gauss(rng)) * std::sin(theta);
        }
        ds.features[i * 2 + 0] = std::clamp(x, 0.0, 1.0);
        ds.features[i * 2 + 1] = std::clamp(y, 0.0, 1.0);
        ds.labels[i] = cls;
    }
    return ds;
}

Dataset make_image_classes(std::size_t n, int class_count, std::size_t side, double noise_std,
                           std::uint64_t seed) {
    if (n < 2 || class_count < 2 || side < 4) {
        throw ContractError("make_image_classes: degenerate dimensions");
    }
    const std::size_t d = side * side;

    // Class prototypes: smoothed random fields, min-max normalized to [0,1].
    std::vector<std::vector<double>> protos(static_cast<std::size_t>(class_count));
    for (int c = 0; c < class_count; ++c) {
        std::mt19937_64 rng(mix_seed(seed, 0xbb0b5, static_cast<std::uint64_t>(c)));
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::vector<double> img(d);
        for (auto& v : img) v = gauss(rng);
        box_blur(img, side);
        box_blur(img, side);
        const auto [mn, mx] = std::minmax_element(img.begin(), img.end());
        const double lo = *mn, hi = *mx;
        for (auto& v : img) v = (v - lo) / (hi - lo);
        protos[static_cast<std::size_t>(c)] = std::move(img);
    }

    Dataset ds;
    ds.class_count = class_count;
    ds.features = Tensor({n, d});
    ds.labels.resize(n);
    const int max_shift = 2;
    for (std::size_t i = 0; i < n; ++i) {
        const int cls = static_cast<int>(i % static_cast<std::size_t>(class_count));
        std::mt19937_64 rng(mix_seed(seed, 0x54a17e, i));
        std::uniform_int_distribution<int> shift(-max_shift, max_shift);
        std::uniform_real_distribution<double> amp(0.6, 1.0);
        std::normal_distribution<double> gauss(0.0, 1.0);
        const int dx = shift(rng), dy = shift(rng);
        const double a = amp(rng);
        const auto& proto = protos[static_cast<std::size_t>(cls)];
        double* row = ds.features.data() + i * d;
        for (std::size_t y = 0; y < side; ++y) {
            for (std::size_t x = 0; x < side; ++x) {
                const std::int64_t sy = std::int64_t(y) - dy, sx = std::int64_t(x) - dx;
                double v = 0.0;
                if (sy >= 0 && sx >= 0 && sy < std::int64_t(side) && sx < std::int64_t(side)) {
                    v = a * proto[std::size_t(sy) * side + std::size_t(sx)];
                }
                v += noise_std * gauss(rng);
                row[y * side + x] = std::clamp(v, 0.0, 1.0);
            }
        }
        ds.labels[i] = cls;
    }
    return ds;
}

Split split(const Dataset& ds, const SplitFractions& fractions, std::uint64_t seed) {
    const double f[3] = {fractions.train, fractions.val, fractions.test};
    double total = 0.0;
    for (double x : f) {
        if (x <= 0.0) throw ConfigError("split: fractions must be positive");
        total += x;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw ConfigError("split: fractions must sum to 1, got " + std::to_string(total));
    }
    const std::size_t n = ds.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(mix_seed(seed, 0x5b117));
    std::shuffle(order.begin(), order.end(), rng);

    const auto n_train = static_cast<std::size_t>(std::floor(n * f[0]));
    const auto n_val = static_cast<std::size_t>(std::floor(n * f[1]));
    const std::size_t n_test = n - n_train - n_val;

    Split out;
    out.train = take_rows(ds, {order.begin(), order.begin() + n_train});
    out.val = take_rows(ds, {order.begin() + n_train, order.begin() + n_train + n_val});
    out.test = take_rows(ds, {order.begin() + n_train + n_val, order.end()});
    (void)n_test;
    return out;
}

std::vector<std::vector<std::size_t>> batches(const Dataset& ds, const BatchPlan& plan,
                                              int epoch) {
    const std::size_t n = ds.size();
    if (plan.batch_size == 0 || plan.batch_size > n) {
        throw ConfigError("batches: batch_size must be in [1, n]");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(mix_seed(plan.shuffle_seed, 0xba7c4, static_cast<std::uint64_t>(epoch)));
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<std::vector<std::size_t>> out;
    for (std::size_t start = 0; start < n; start += plan.batch_size) {
        const std::size_t end = std::min(start + plan.batch_size, n);
        if (plan.drop_last && end - start < plan.batch_size) break;
        out.emplace_back(order.begin() + start, order.begin() + end);
    }
    return out;
}

std::pair<Tensor, std::vector<int>> gather(const Dataset& ds,
                                           const std::vector<std::size_t>& indices) {
    const std::size_t d = ds.dim();
    Tensor feats({indices.size(), d});
    std::vector<int> labels(indices.size());
    for (std::size_t r = 0; r < indices.size(); ++r) {
        const double* src = ds.features.data() + indices[r] * d;
        std::copy(src, src + d, feats.data() + r * d);
        labels[r] = ds.labels[indices[r]];
    }
    return {std::move(feats), std::move(labels)};
}

}  // namespace dsd

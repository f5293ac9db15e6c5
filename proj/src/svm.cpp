#include "pedscan/svm.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "pedscan/errors.hpp"

namespace pedscan {

namespace {

constexpr std::array<char, 8> kModelMagic = {'P', 'D', 'S', 'V', 'M', '0', '1', '\0'};

struct WindowLayout {
    const FeatureGrid* grid;
    const SvmStream* stream;
};

// Pairs the model's streams with their grids (Fa = LBP first, then Fb = HOG)
// and validates shapes. Both score paths share this.
std::vector<WindowLayout> match_streams(const FeatureGrid* fa, const FeatureGrid* fb,
                                        const SvmModel& model) {
    if (fa == nullptr && fb == nullptr)
        throw DimensionError("score_windows: at least one feature grid required");
    std::vector<WindowLayout> layout;
    for (const auto& stream : model.streams) {
        const FeatureGrid* grid = stream.kind == StreamKind::Lbp ? fa : fb;
        if (grid == nullptr) continue;
        if (grid->s != stream.s)
            throw ModelError("score_windows: grid bin count " + std::to_string(grid->s) +
                             " does not match model stream (" + std::to_string(stream.s) + ")");
        if (grid->hb < stream.hn || grid->wb < stream.wn)
            throw DimensionError("score_windows: feature grid smaller than one window");
        layout.push_back({grid, &stream});
    }
    if (layout.empty()) throw ModelError("score_windows: no grid matches any model stream");
    // all present grids must cover the same window lattice
    for (const auto& l : layout)
        if (l.grid->hb != layout.front().grid->hb || l.grid->wb != layout.front().grid->wb)
            throw DimensionError("score_windows: feature grids disagree on block dims");
    if (fa && !model.find(StreamKind::Lbp))
        throw ModelError("score_windows: LBP grid given but model has no lbp stream");
    if (fb && !model.find(StreamKind::Hog))
        throw ModelError("score_windows: HOG grid given but model has no hog stream");
    return layout;
}

template <typename WindowFn>
ScoreMap score_grid(const std::vector<WindowLayout>& layout, const SvmModel& model,
                    const ExecConfig& config, WindowFn&& window_score) {
    const std::size_t hb = layout.front().grid->hb;
    const std::size_t wb = layout.front().grid->wb;
    const std::size_t hn = layout.front().stream->hn;
    const std::size_t wn = layout.front().stream->wn;
    ScoreMap map;
    map.y_count = hb - hn + 1;
    map.x_count = wb - wn + 1;
    map.scores.resize(map.y_count * map.x_count);
    parallel_for_2d(
        map.y_count, map.x_count,
        [&](std::size_t y, std::size_t x) {
            map.scores[y * map.x_count + x] = window_score(y, x) + model.bias;
        },
        config);
    return map;
}

}  // namespace

const SvmStream* SvmModel::find(StreamKind kind) const {
    for (const auto& s : streams)
        if (s.kind == kind) return &s;
    return nullptr;
}

ScoreMap score_windows(const FeatureGrid* fa, const FeatureGrid* fb, const SvmModel& model,
                       const ExecConfig& config) {
    const auto layout = match_streams(fa, fb, model);
    std::size_t total = 0;
    for (const auto& l : layout) total += l.stream->weights.size();
    return score_grid(layout, model, config, [&](std::size_t y, std::size_t x) {
        return group_strided_reduce(
            total,
            [&](std::size_t idx) {
                for (const auto& l : layout) {
                    if (idx < l.stream->weights.size()) {
                        const std::size_t s = l.stream->s;
                        const std::size_t t = idx % s;
                        const std::size_t j = (idx / s) % l.stream->wn;
                        const std::size_t i = idx / (s * l.stream->wn);
                        return static_cast<double>(l.grid->at(y + i, x + j, t)) *
                               l.stream->at(i, j, t);
                    }
                    idx -= l.stream->weights.size();
                }
                return 0.0;  // unreachable
            },
            config.group_width);
    });
}

ScoreMap score_windows_naive(const FeatureGrid* fa, const FeatureGrid* fb, const SvmModel& model,
                             const ExecConfig& config) {
    const auto layout = match_streams(fa, fb, model);
    return score_grid(layout, model, config, [&](std::size_t y, std::size_t x) {
        double sum = 0.0;
        for (const auto& l : layout)
            for (std::size_t i = 0; i < l.stream->hn; ++i)
                for (std::size_t j = 0; j < l.stream->wn; ++j)
                    for (std::size_t t = 0; t < l.stream->s; ++t)
                        sum += static_cast<double>(l.grid->at(y + i, x + j, t)) * l.stream->at(i, j, t);
        return sum;
    });
}

std::vector<Detection> collect_detections(std::span<const ScoreMap> score_maps, double threshold) {
    std::vector<Detection> detections;
    for (const auto& map : score_maps) {
        for (std::size_t y = 0; y < map.y_count; ++y)
            for (std::size_t x = 0; x < map.x_count; ++x) {
                const double score = map.at(y, x);
                if (score <= threshold) continue;
                Detection d;
                d.x = std::lround(8.0 * static_cast<double>(x) / map.scale_x);
                d.y = std::lround(8.0 * static_cast<double>(y) / map.scale_y);
                d.width = std::lround(static_cast<double>(kWindowWidth) / map.scale_x);
                d.height = std::lround(static_cast<double>(kWindowHeight) / map.scale_y);
                d.score = score;
                d.level = map.level;
                detections.push_back(d);
            }
    }
    return detections;
}

SvmModel train_sgd(const std::vector<TrainingSample>& samples, const std::vector<SvmStream>& layout,
                   const SgdParams& params) {
    std::size_t dim = 0;
    for (const auto& stream : layout) dim += stream.hn * stream.wn * stream.s;
    if (samples.empty()) throw ModelError("train_sgd: no samples");
    bool has_pos = false, has_neg = false;
    for (const auto& s : samples) {
        if (s.features.size() != dim)
            throw DimensionError("train_sgd: sample length " + std::to_string(s.features.size()) +
                                 " does not match layout (" + std::to_string(dim) + ")");
        (s.label > 0 ? has_pos : has_neg) = true;
    }
    if (!has_pos || !has_neg) throw ModelError("train_sgd: both classes required");

    std::vector<double> w(dim, 0.0);
    double bias = 0.0;
    std::mt19937_64 rng(params.seed);
    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (const std::size_t idx : order) {
            const auto& sample = samples[idx];
            double margin = bias;
            for (std::size_t k = 0; k < dim; ++k) margin += w[k] * sample.features[k];
            margin *= sample.label;
            const double decay = 1.0 - params.learn_rate * params.regularization;
            for (auto& wk : w) wk *= decay;
            if (margin < 1.0) {
                const double step = params.learn_rate * sample.label;
                for (std::size_t k = 0; k < dim; ++k) w[k] += step * sample.features[k];
                bias += step;
            }
        }
    }

    SvmModel model;
    model.bias = bias;
    model.threshold = 0.0;
    std::size_t offset = 0;
    for (const auto& stream : layout) {
        SvmStream out = stream;
        const std::size_t n = stream.hn * stream.wn * stream.s;
        out.weights.assign(w.begin() + static_cast<std::ptrdiff_t>(offset),
                           w.begin() + static_cast<std::ptrdiff_t>(offset + n));
        offset += n;
        model.streams.push_back(std::move(out));
    }
    return model;
}

namespace {

template <typename T>
void write_le(std::ostream& out, T value) {
    // host is little-endian on every supported target
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_le(std::istream& in, const std::string& path) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw FormatError(path + ": model file truncated (length mismatch)");
    return value;
}

}  // namespace

void save_model(const SvmModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path + ": cannot open file for writing");
    out.write(kModelMagic.data(), kModelMagic.size());
    write_le(out, static_cast<std::uint32_t>(model.streams.size()));
    for (const auto& stream : model.streams) {
        write_le(out, static_cast<std::uint8_t>(stream.kind));
        write_le(out, static_cast<std::uint32_t>(stream.hn));
        write_le(out, static_cast<std::uint32_t>(stream.wn));
        write_le(out, static_cast<std::uint32_t>(stream.s));
        for (const double v : stream.weights) write_le(out, v);
    }
    write_le(out, model.bias);
    write_le(out, model.threshold);
    if (!out) throw IoError(path + ": write failed");
}

SvmModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path + ": cannot open file");
    std::array<char, 8> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kModelMagic) throw FormatError(path + ": bad model magic");
    const auto stream_count = read_le<std::uint32_t>(in, path);
    SvmModel model;
    for (std::uint32_t k = 0; k < stream_count; ++k) {
        SvmStream stream;
        const auto tag = read_le<std::uint8_t>(in, path);
        if (tag > 1) throw FormatError(path + ": unknown stream tag " + std::to_string(tag));
        stream.kind = static_cast<StreamKind>(tag);
        stream.hn = read_le<std::uint32_t>(in, path);
        stream.wn = read_le<std::uint32_t>(in, path);
        stream.s = read_le<std::uint32_t>(in, path);
        stream.weights.resize(stream.hn * stream.wn * stream.s);
        for (auto& v : stream.weights) v = read_le<double>(in, path);
        model.streams.push_back(std::move(stream));
    }
    model.bias = read_le<double>(in, path);
    model.threshold = read_le<double>(in, path);
    return model;
}

std::string detection_to_json(const Detection& d) {
    std::ostringstream out;
    out.precision(17);
    out << "{\"x\": " << d.x << ", \"y\": " << d.y << ", \"width\": " << d.width
        << ", \"height\": " << d.height << ", \"score\": " << d.score
        << ", \"level\": " << d.level << "}";
    return out.str();
}

}  // namespace pedscan

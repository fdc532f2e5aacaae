// Copyright (C) 2026 The ppgclean Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "ppgclean/detector.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <random>

#include "ppgclean/error.hpp"

namespace ppgclean {

std::string to_string(LayerKind kind) {
    switch (kind) {
    case LayerKind::Conv1d: return "conv1d";
    case LayerKind::MaxPool1d: return "maxpool1d";
    case LayerKind::GlobalAvgPool: return "gap";
    case LayerKind::Dense: return "dense";
    }
    return "kind#" + std::to_string(static_cast<std::uint32_t>(kind));
}

std::string to_string(const TensorShape& shape) {
    if (shape.cols == 0) {
        return std::to_string(shape.rows);
    }
    return std::to_string(shape.rows) + "x" + std::to_string(shape.cols);
}

const std::vector<LayerSpec>& reference_topology() {
    static const std::vector<LayerSpec> topology{
        {LayerKind::Conv1d, {70, 10, 1}},
        {LayerKind::Conv1d, {70, 10, 70}},
        {LayerKind::MaxPool1d, {3, 3}},
        {LayerKind::Conv1d, {140, 10, 70}},
        {LayerKind::Conv1d, {140, 10, 140}},
        {LayerKind::GlobalAvgPool, {}},
        {LayerKind::Dense, {32, 140, static_cast<std::uint32_t>(Activation::Relu)}},
        {LayerKind::Dense, {16, 32, static_cast<std::uint32_t>(Activation::Relu)}},
        {LayerKind::Dense, {2, 16, static_cast<std::uint32_t>(Activation::Softmax)}},
    };
    return topology;
}

const std::array<TensorShape, 9>& reference_shape_chain() {
    static const std::array<TensorShape, 9> chain{{
        {247, 70}, {238, 70}, {79, 70}, {70, 140}, {61, 140}, {140, 0}, {32, 0}, {16, 0}, {2, 0},
    }};
    return chain;
}

namespace {

std::size_t weight_count(const LayerSpec& spec) {
    switch (spec.kind) {
    case LayerKind::Conv1d: return std::size_t{spec.shape[0]} * spec.shape[1] * spec.shape[2];
    case LayerKind::Dense: return std::size_t{spec.shape[0]} * spec.shape[1];
    default: return 0;
    }
}

std::size_t bias_count(const LayerSpec& spec) {
    return spec.kind == LayerKind::Conv1d || spec.kind == LayerKind::Dense ? spec.shape[0] : 0;
}

std::string describe_shape(const std::vector<std::uint32_t>& shape) {
    std::string s = "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i > 0) s += ", ";
        s += std::to_string(shape[i]);
    }
    return s + "]";
}

const char* shape_field(LayerKind kind, std::size_t i) {
    static const char* conv[] = {"filters", "width", "input channels"};
    static const char* pool[] = {"pool", "stride"};
    static const char* dense[] = {"outputs", "inputs", "activation"};
    switch (kind) {
    case LayerKind::Conv1d: return i < 3 ? conv[i] : "shape";
    case LayerKind::MaxPool1d: return i < 2 ? pool[i] : "shape";
    case LayerKind::Dense: return i < 3 ? dense[i] : "shape";
    default: return "shape";
    }
}

}  // namespace

std::optional<std::string> topology_mismatch(const DetectorWeights& weights) {
    const auto& ref = reference_topology();
    for (std::size_t i = 0; i < std::max(ref.size(), weights.layers.size()); ++i) {
        const std::string where = "layer " + std::to_string(i + 1);
        if (i >= weights.layers.size()) {
            return where + " (" + to_string(ref[i].kind) + ") is missing";
        }
        if (i >= ref.size()) {
            return where + " is unexpected; the network has " + std::to_string(ref.size()) + " layers";
        }
        const LayerWeights& got = weights.layers[i];
        const LayerSpec& want = ref[i];
        if (got.kind != want.kind) {
            return where + ": expected " + to_string(want.kind) + ", got " + to_string(got.kind);
        }
        if (got.shape.size() != want.shape.size()) {
            return where + " (" + to_string(want.kind) + "): expected shape " + describe_shape(want.shape) +
                   ", got " + describe_shape(got.shape);
        }
        for (std::size_t d = 0; d < want.shape.size(); ++d) {
            if (got.shape[d] != want.shape[d]) {
                return where + " (" + to_string(want.kind) + "): expected " + std::to_string(want.shape[d]) +
                       " " + shape_field(want.kind, d) + ", got " + std::to_string(got.shape[d]);
            }
        }
        if (got.weights.size() != weight_count(want)) {
            return where + ": expected " + std::to_string(weight_count(want)) + " weights, got " +
                   std::to_string(got.weights.size());
        }
        if (got.biases.size() != bias_count(want)) {
            return where + ": expected " + std::to_string(bias_count(want)) + " biases, got " +
                   std::to_string(got.biases.size());
        }
        auto finite = [](float v) { return std::isfinite(v); };
        if (!std::all_of(got.weights.begin(), got.weights.end(), finite) ||
            !std::all_of(got.biases.begin(), got.biases.end(), finite)) {
            return where + ": non-finite coefficient";
        }
    }
    return std::nullopt;
}

DetectorWeights zero_weights() {
    DetectorWeights w;
    for (const LayerSpec& spec : reference_topology()) {
        w.layers.push_back({spec.kind, spec.shape, std::vector<float>(weight_count(spec), 0.0f),
                            std::vector<float>(bias_count(spec), 0.0f)});
    }
    return w;
}

DetectorWeights random_weights(std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    auto unit = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    DetectorWeights w = zero_weights();
    for (LayerWeights& layer : w.layers) {
        if (layer.weights.empty()) continue;
        const double fan_in = static_cast<double>(layer.weights.size()) / static_cast<double>(layer.shape[0]);
        const double limit = std::sqrt(6.0 / fan_in);
        for (float& v : layer.weights) v = static_cast<float>((2.0 * unit() - 1.0) * limit);
        for (float& v : layer.biases) v = static_cast<float>((2.0 * unit() - 1.0) * 0.05);
    }
    return w;
}

// ---------------------------------------------------------------------------

std::vector<double> pack_conv_kernels(std::span<const double> kernels, std::size_t filters,
                                      std::size_t width, std::size_t channels) {
    if (kernels.size() != filters * width * channels) {
        throw Error(ErrorKind::Shape, "conv1d: expected " + std::to_string(filters * width * channels) +
                                          " kernel coefficients, got " + std::to_string(kernels.size()));
    }
    std::vector<double> packed(kernels.size());
    for (std::size_t k = 0; k < filters; ++k) {
        for (std::size_t w = 0; w < width; ++w) {
            for (std::size_t c = 0; c < channels; ++c) {
                packed[(w * channels + c) * filters + k] = kernels[(k * width + w) * channels + c];
            }
        }
    }
    return packed;
}

namespace {

Activations conv1d_packed(const Activations& input, const double* packed, const double* bias,
                          std::size_t filters, std::size_t width, const kernels::KernelTable& impl) {
    if (input.length < width) {
        throw Error(ErrorKind::Shape, "conv1d: input length " + std::to_string(input.length) +
                                          " shorter than kernel width " + std::to_string(width));
    }
    Activations out;
    out.length = input.length - width + 1;
    out.channels = filters;
    out.data.resize(out.length * filters);
    impl.conv1d_relu(input.data.data(), input.length, input.channels, packed, bias, filters, width,
                     out.data.data());
    return out;
}

}  // namespace

Activations conv1d_valid(const Activations& input, std::span<const double> kernels,
                         std::span<const double> bias, std::size_t filters, std::size_t width,
                         const kernels::KernelTable& impl) {
    if (width == 0 || filters == 0) {
        throw Error(ErrorKind::Shape, "conv1d: zero filters or width");
    }
    if (bias.size() != filters) {
        throw Error(ErrorKind::Shape, "conv1d: expected " + std::to_string(filters) + " biases, got " +
                                          std::to_string(bias.size()));
    }
    if (input.data.size() != input.length * input.channels) {
        throw Error(ErrorKind::Shape, "conv1d: activation buffer does not match its shape");
    }
    const auto packed = pack_conv_kernels(kernels, filters, width, input.channels);
    return conv1d_packed(input, packed.data(), bias.data(), filters, width, impl);
}

Activations maxpool1d(const Activations& input, std::size_t pool, std::size_t stride) {
    if (pool == 0 || stride == 0) {
        throw Error(ErrorKind::Shape, "maxpool1d: pool and stride must be positive");
    }
    if (input.length < pool) {
        throw Error(ErrorKind::Shape, "maxpool1d: input length " + std::to_string(input.length) +
                                          " shorter than pool " + std::to_string(pool));
    }
    Activations out;
    out.length = (input.length - pool) / stride + 1;
    out.channels = input.channels;
    out.data.resize(out.length * out.channels);
    for (std::size_t t = 0; t < out.length; ++t) {
        for (std::size_t c = 0; c < out.channels; ++c) {
            double best = input.at(t * stride, c);
            for (std::size_t p = 1; p < pool; ++p) {
                best = std::max(best, input.at(t * stride + p, c));
            }
            out.data[t * out.channels + c] = best;
        }
    }
    return out;
}

std::vector<double> global_avg_pool(const Activations& input) {
    if (input.length == 0) {
        throw Error(ErrorKind::Shape, "global_avg_pool: empty input");
    }
    std::vector<double> out(input.channels, 0.0);
    for (std::size_t t = 0; t < input.length; ++t) {
        for (std::size_t c = 0; c < input.channels; ++c) {
            out[c] += input.at(t, c);
        }
    }
    for (double& v : out) v /= static_cast<double>(input.length);
    return out;
}

std::vector<double> dense(std::span<const double> input, std::span<const double> weights,
                          std::span<const double> bias, std::size_t outputs, Activation activation,
                          const kernels::KernelTable& impl) {
    if (weights.size() != outputs * input.size() || bias.size() != outputs) {
        throw Error(ErrorKind::Shape, "dense: " + std::to_string(outputs) + "x" + std::to_string(input.size()) +
                                          " layer given " + std::to_string(weights.size()) + " weights and " +
                                          std::to_string(bias.size()) + " biases");
    }
    std::vector<double> out(outputs);
    for (std::size_t m = 0; m < outputs; ++m) {
        out[m] = bias[m] + impl.dot(weights.data() + m * input.size(), input.data(), input.size());
    }
    if (activation == Activation::Relu) {
        for (double& v : out) v = std::max(v, 0.0);
    } else {
        const double peak = *std::max_element(out.begin(), out.end());
        double total = 0.0;
        for (double& v : out) {
            v = std::exp(v - peak);
            total += v;
        }
        for (double& v : out) v /= total;
    }
    return out;
}

// ---------------------------------------------------------------------------

Detector::Detector(DetectorWeights weights, const kernels::KernelTable& impl)
    : weights_(std::move(weights)), impl_(&impl) {
    if (auto problem = topology_mismatch(weights_)) {
        throw Error(ErrorKind::Shape, "detector weights: " + *problem);
    }
    prepared_.reserve(weights_.layers.size());
    for (const LayerWeights& layer : weights_.layers) {
        Prepared p;
        std::vector<double> w(layer.weights.begin(), layer.weights.end());
        p.biases.assign(layer.biases.begin(), layer.biases.end());
        if (layer.kind == LayerKind::Conv1d) {
            p.weights = pack_conv_kernels(w, layer.shape[0], layer.shape[1], layer.shape[2]);
        } else {
            p.weights = std::move(w);
        }
        prepared_.push_back(std::move(p));
    }
}

ClassScores Detector::infer(const SignalWindow& window, std::vector<TensorShape>* trace) const {
    Activations act;
    act.length = kWindowSize;
    act.channels = 1;
    act.data.assign(window.samples().begin(), window.samples().end());
    std::vector<double> flat;
    std::vector<TensorShape> shapes;
    shapes.reserve(weights_.layers.size());

    for (std::size_t i = 0; i < weights_.layers.size(); ++i) {
        const LayerWeights& layer = weights_.layers[i];
        const Prepared& p = prepared_[i];
        switch (layer.kind) {
        case LayerKind::Conv1d:
            act = conv1d_packed(act, p.weights.data(), p.biases.data(), layer.shape[0], layer.shape[1], *impl_);
            shapes.push_back({act.length, act.channels});
            break;
        case LayerKind::MaxPool1d:
            act = maxpool1d(act, layer.shape[0], layer.shape[1]);
            shapes.push_back({act.length, act.channels});
            break;
        case LayerKind::GlobalAvgPool:
            flat = global_avg_pool(act);
            shapes.push_back({flat.size(), 0});
            break;
        case LayerKind::Dense:
            flat = dense(flat, p.weights, p.biases, layer.shape[0], static_cast<Activation>(layer.shape[2]), *impl_);
            shapes.push_back({flat.size(), 0});
            break;
        }
    }
    assert(std::equal(shapes.begin(), shapes.end(), reference_shape_chain().begin(),
                      reference_shape_chain().end()));
    if (trace != nullptr) {
        *trace = std::move(shapes);
    }
    return {flat[0], flat[1]};
}

ClassScores infer(const SignalWindow& window, const DetectorWeights& weights) {
    return Detector(weights).infer(window);
}

}  // namespace ppgclean

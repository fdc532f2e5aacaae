// Copyright (C) 2026 The ppgclean Authors
// SPDX-License-Identifier: Apache-2.0
//
// Clean/noisy window classifier. The topology is fixed:
//
//   layer  kind              shape                      output
//   1      conv1d + relu     70 filters x 10 taps       247 x 70
//   2      conv1d + relu     70 filters x 10 taps       238 x 70
//   3      max pool          3, stride 3                79 x 70
//   4      conv1d + relu     140 filters x 10 taps      70 x 140
//   5      conv1d + relu     140 filters x 10 taps      61 x 140
//   6      global avg pool                              140
//   7      dense + relu      140 -> 32                  32
//   8      dense + relu      32 -> 16                   16
//   9      dense + softmax   16 -> 2                    2
//
// Coefficients are stored as 32-bit floats and evaluated in double.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ppgclean/kernels/kernels.hpp"
#include "ppgclean/signal.hpp"

namespace ppgclean {

enum class LayerKind : std::uint32_t {
    Conv1d = 1,
    MaxPool1d = 2,
    GlobalAvgPool = 3,
    Dense = 4,
};

enum class Activation : std::uint32_t { Relu = 0, Softmax = 1 };

std::string to_string(LayerKind kind);

/// Shape metadata per kind:
///   conv1d    [filters, width, in_channels]; weights [filter][tap][channel]
///   maxpool1d [pool, stride]
///   gap       []
///   dense     [outputs, inputs, activation]; weights [output][input]
struct LayerWeights {
    LayerKind kind = LayerKind::Conv1d;
    std::vector<std::uint32_t> shape;
    std::vector<float> weights;
    std::vector<float> biases;

    bool operator==(const LayerWeights&) const = default;
};

struct DetectorWeights {
    std::vector<LayerWeights> layers;

    bool operator==(const DetectorWeights&) const = default;
};

struct LayerSpec {
    LayerKind kind;
    std::vector<std::uint32_t> shape;
};

const std::vector<LayerSpec>& reference_topology();

/// Describes the first layer (1-based) that disagrees with the reference
/// topology, or nullopt when the weights are valid.
std::optional<std::string> topology_mismatch(const DetectorWeights& weights);

/// All coefficients zero: every window scores [0.5, 0.5].
DetectorWeights zero_weights();

/// He-style uniform initialisation from a fixed seed.
DetectorWeights random_weights(std::uint64_t seed);

// ---------------------------------------------------------------------------
// Layer primitives

/// length x channels, row-major.
struct Activations {
    std::size_t length = 0;
    std::size_t channels = 0;
    std::vector<double> data;

    double at(std::size_t t, std::size_t c) const noexcept { return data[t * channels + c]; }
};

/// [filter][tap][channel] -> [tap][channel][filter], the layout the kernels read.
std::vector<double> pack_conv_kernels(std::span<const double> kernels, std::size_t filters,
                                      std::size_t width, std::size_t channels);

/// Valid (unpadded) stride-1 cross-correlation followed by ReLU. `kernels`
/// is [filter][tap][channel].
Activations conv1d_valid(const Activations& input, std::span<const double> kernels,
                         std::span<const double> bias, std::size_t filters, std::size_t width,
                         const kernels::KernelTable& impl = kernels::active_kernels());

/// Disjoint max pooling; the trailing remainder is dropped.
Activations maxpool1d(const Activations& input, std::size_t pool = 3, std::size_t stride = 3);

std::vector<double> global_avg_pool(const Activations& input);

/// weights is [output][input].
std::vector<double> dense(std::span<const double> input, std::span<const double> weights,
                          std::span<const double> bias, std::size_t outputs, Activation activation,
                          const kernels::KernelTable& impl = kernels::active_kernels());

// ---------------------------------------------------------------------------
// Inference

struct ClassScores {
    double p_clean = 0.5;
    double p_noisy = 0.5;

    /// Ties resolve to clean.
    bool noisy() const noexcept { return p_noisy > p_clean; }
};

/// rows x cols; cols == 0 marks a flat vector.
struct TensorShape {
    std::size_t rows = 0;
    std::size_t cols = 0;

    bool operator==(const TensorShape&) const = default;
};

std::string to_string(const TensorShape& shape);

/// Output shapes of the nine layers for any valid weights.
const std::array<TensorShape, 9>& reference_shape_chain();

/// Weights validated and converted once; infer() is const and thread-safe.
class Detector {
public:
    /// Throws Shape naming the first layer that breaks the topology.
    explicit Detector(DetectorWeights weights,
                      const kernels::KernelTable& impl = kernels::active_kernels());

    ClassScores infer(const SignalWindow& window, std::vector<TensorShape>* trace = nullptr) const;

    const DetectorWeights& weights() const noexcept { return weights_; }

private:
    struct Prepared {
        std::vector<double> weights;
        std::vector<double> biases;
    };

    DetectorWeights weights_;
    std::vector<Prepared> prepared_;
    const kernels::KernelTable* impl_;
};

ClassScores infer(const SignalWindow& window, const DetectorWeights& weights);

// ---------------------------------------------------------------------------
// Weights file
//
//   bytes 0..7   magic "PPGDETNN"
//   u32          version (1)
//   u32          layer count
//   per layer:
//     u32        kind tag (1 conv1d, 2 maxpool1d, 3 gap, 4 dense)
//     u32        shape count, then that many u32
//     u32        weight count, then that many f32
//     u32        bias count, then that many f32
//
// All integers and floats little-endian; arrays row-major.

inline constexpr std::array<char, 8> kWeightsMagic{'P', 'P', 'G', 'D', 'E', 'T', 'N', 'N'};
inline constexpr std::uint32_t kWeightsVersion = 1;

std::vector<std::uint8_t> serialize_weights(const DetectorWeights& weights);

/// Throws BadMagic, VersionMismatch, Truncated (with byte offset), Format
/// (internal inconsistency, non-finite values, trailing bytes) or Topology.
DetectorWeights parse_weights(std::span<const std::uint8_t> bytes);

void save_weights(const DetectorWeights& weights, const std::filesystem::path& path);
DetectorWeights load_weights(const std::filesystem::path& path);

}  // namespace ppgclean

// Copyright (C) 2026 The ppgclean Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string_view>

#include "ppgclean/detector.hpp"
#include "ppgclean/error.hpp"

namespace ppgclean {
namespace {

constexpr std::uint32_t kMaxShapeRank = 8;
constexpr std::uint32_t kMaxLayers = 64;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
}

void put_floats(std::vector<std::uint8_t>& out, const std::vector<float>& values) {
    put_u32(out, static_cast<std::uint32_t>(values.size()));
    for (float f : values) {
        put_u32(out, std::bit_cast<std::uint32_t>(f));
    }
}

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::uint32_t u32(std::string_view what) {
        need(4, what);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
        }
        pos_ += 4;
        return v;
    }

    std::vector<float> floats(std::string_view what) {
        const std::uint32_t count = u32(what);
        need(std::size_t{count} * 4, what);
        std::vector<float> values(count);
        for (float& f : values) {
            f = std::bit_cast<float>(u32(what));
        }
        return values;
    }

    void need(std::size_t n, std::string_view what) const {
        if (bytes_.size() - pos_ < n) {
            throw Error(ErrorKind::Truncated, "weights file truncated at byte offset " + std::to_string(bytes_.size()) +
                                                  " while reading " + std::string(what) + " at offset " +
                                                  std::to_string(pos_));
        }
    }

    std::size_t pos() const noexcept { return pos_; }
    std::size_t remaining() const noexcept { return bytes_.size() - pos_; }
    void skip(std::size_t n) noexcept { pos_ += n; }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> serialize_weights(const DetectorWeights& weights) {
    std::vector<std::uint8_t> out(kWeightsMagic.begin(), kWeightsMagic.end());
    put_u32(out, kWeightsVersion);
    put_u32(out, static_cast<std::uint32_t>(weights.layers.size()));
    for (const LayerWeights& layer : weights.layers) {
        put_u32(out, static_cast<std::uint32_t>(layer.kind));
        put_u32(out, static_cast<std::uint32_t>(layer.shape.size()));
        for (std::uint32_t d : layer.shape) put_u32(out, d);
        put_floats(out, layer.weights);
        put_floats(out, layer.biases);
    }
    return out;
}

DetectorWeights parse_weights(std::span<const std::uint8_t> bytes) {
    ByteReader in(bytes);
    in.need(kWeightsMagic.size(), "magic");
    if (!std::equal(kWeightsMagic.begin(), kWeightsMagic.end(), bytes.begin())) {
        throw Error(ErrorKind::BadMagic, "weights file does not start with PPGDETNN");
    }
    in.skip(kWeightsMagic.size());

    const std::uint32_t version = in.u32("version");
    if (version != kWeightsVersion) {
        throw Error(ErrorKind::VersionMismatch, "weights file version " + std::to_string(version) +
                                                    ", this build reads version " + std::to_string(kWeightsVersion));
    }
    const std::uint32_t count = in.u32("layer count");
    if (count > kMaxLayers) {
        throw Error(ErrorKind::Format, "weights file declares " + std::to_string(count) + " layers");
    }

    DetectorWeights w;
    w.layers.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::string label = "layer " + std::to_string(i + 1);
        LayerWeights layer;
        const std::uint32_t tag = in.u32(label + " kind");
        if (tag < 1 || tag > 4) {
            throw Error(ErrorKind::Format, label + ": unknown kind tag " + std::to_string(tag));
        }
        layer.kind = static_cast<LayerKind>(tag);
        const std::uint32_t rank = in.u32(label + " shape count");
        if (rank > kMaxShapeRank) {
            throw Error(ErrorKind::Format, label + ": shape count " + std::to_string(rank) + " too large");
        }
        for (std::uint32_t d = 0; d < rank; ++d) {
            layer.shape.push_back(in.u32(label + " shape"));
        }
        layer.weights = in.floats(label + " weights");
        layer.biases = in.floats(label + " biases");
        w.layers.push_back(std::move(layer));
    }
    if (in.remaining() != 0) {
        throw Error(ErrorKind::Format, std::to_string(in.remaining()) + " trailing bytes after offset " +
                                           std::to_string(in.pos()));
    }
    if (auto problem = topology_mismatch(w)) {
        throw Error(ErrorKind::Topology, "weights topology: " + *problem);
    }
    return w;
}

void save_weights(const DetectorWeights& weights, const std::filesystem::path& path) {
    const auto bytes = serialize_weights(weights);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::Path, "cannot open " + path.string() + " for writing");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error(ErrorKind::Path, "write failed for " + path.string());
    }
}

DetectorWeights load_weights(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::Path, "cannot open weights file " + path.string());
    }
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_weights(bytes);
}

}  // namespace ppgclean

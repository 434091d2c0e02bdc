// Flat binary parameter container plus a JSON sidecar describing the spec.
//
// Layout (all integers little-endian):
//   magic "SFNN1" (5 bytes)
//   u32 layer count
//   per layer: u32 name length, name bytes, u32 tensor count,
//              per tensor: u32 name length, name bytes, u64 rows, u64 cols
//   then every tensor's doubles in manifest order, column-major.

#ifndef SENTIFORGE_NN_SERIALIZE_HPP
#define SENTIFORGE_NN_SERIALIZE_HPP

#include <cstdint>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "sentiforge/nn/model.hpp"

namespace sentiforge::nn {

namespace detail {

inline void write_u32(std::ostream& out, std::uint32_t value) {
    for (int i = 0; i < 4; ++i) out.put(static_cast<char>((value >> (8 * i)) & 0xFF));
}

inline void write_u64(std::ostream& out, std::uint64_t value) {
    for (int i = 0; i < 8; ++i) out.put(static_cast<char>((value >> (8 * i)) & 0xFF));
}

inline std::uint32_t read_u32(std::istream& in) {
    std::uint32_t value = 0;
    for (int i = 0; i < 4; ++i) {
        const int c = in.get();
        if (c == EOF) throw DataError("model file truncated");
        value |= static_cast<std::uint32_t>(c) << (8 * i);
    }
    return value;
}

inline std::uint64_t read_u64(std::istream& in) {
    std::uint64_t value = 0;
    for (int i = 0; i < 8; ++i) {
        const int c = in.get();
        if (c == EOF) throw DataError("model file truncated");
        value |= static_cast<std::uint64_t>(c) << (8 * i);
    }
    return value;
}

inline void write_name(std::ostream& out, const std::string& name) {
    write_u32(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
}

inline std::string read_name(std::istream& in) {
    const std::uint32_t len = read_u32(in);
    std::string name(len, '\0');
    if (!in.read(name.data(), len)) throw DataError("model file truncated");
    return name;
}

}  // namespace detail

inline constexpr char kModelMagic[] = "SFNN1";

template <class Scalar>
void save_model(SequenceModel<Scalar>& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write model file: " + path);
    out.write(kModelMagic, 5);

    auto layers = model.layers();
    detail::write_u32(out, static_cast<std::uint32_t>(layers.size()));
    for (Layer<Scalar>* layer : layers) {
        detail::write_name(out, layer->describe());
        auto params = layer->parameters();
        detail::write_u32(out, static_cast<std::uint32_t>(params.size()));
        for (TensorRef<Scalar>& p : params) {
            detail::write_name(out, p.name);
            detail::write_u64(out, static_cast<std::uint64_t>(p.tensor->rows()));
            detail::write_u64(out, static_cast<std::uint64_t>(p.tensor->cols()));
        }
    }
    for (Layer<Scalar>* layer : layers) {
        for (TensorRef<Scalar>& p : layer->parameters()) {
            for (Eigen::Index c = 0; c < p.tensor->cols(); ++c) {
                for (Eigen::Index r = 0; r < p.tensor->rows(); ++r) {
                    const double v = static_cast<double>((*p.tensor)(r, c));
                    out.write(reinterpret_cast<const char*>(&v), sizeof(double));
                }
            }
        }
    }
    if (!out) throw DataError("failed writing model file: " + path);

    nlohmann::json sidecar;
    for (const LayerSpec& layer : model.spec().layers) {
        nlohmann::json j;
        j["kind"] = to_string(layer.kind);
        j["units"] = layer.units;
        if (layer.kind == LayerKind::Conv1d) j["kernel_width"] = layer.kernel_width;
        sidecar["layers"].push_back(j);
    }
    std::ofstream side(path + ".json");
    if (!side) throw DataError("cannot write model sidecar: " + path + ".json");
    side << sidecar.dump(2) << '\n';
}

// Loads parameters into a model that was built from the same spec and input
// width; shape mismatches are hard errors.
template <class Scalar>
void load_model(SequenceModel<Scalar>& model, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model file: " + path);
    char magic[5];
    if (!in.read(magic, 5) || std::string(magic, 5) != kModelMagic) {
        throw DataError(path + ": bad magic bytes (expected SFNN1)");
    }
    auto layers = model.layers();
    const std::uint32_t layer_count = detail::read_u32(in);
    if (layer_count != layers.size()) {
        throw DataError(path + ": layer count mismatch");
    }
    for (Layer<Scalar>* layer : layers) {
        const std::string name = detail::read_name(in);
        if (name != layer->describe()) {
            throw DataError(path + ": layer manifest mismatch, file has '" + name +
                            "', model has '" + layer->describe() + "'");
        }
        auto params = layer->parameters();
        const std::uint32_t tensor_count = detail::read_u32(in);
        if (tensor_count != params.size()) {
            throw DataError(path + ": tensor count mismatch in " + name);
        }
        for (TensorRef<Scalar>& p : params) {
            const std::string tensor_name = detail::read_name(in);
            const std::uint64_t rows = detail::read_u64(in);
            const std::uint64_t cols = detail::read_u64(in);
            if (tensor_name != p.name ||
                rows != static_cast<std::uint64_t>(p.tensor->rows()) ||
                cols != static_cast<std::uint64_t>(p.tensor->cols())) {
                throw DataError(path + ": tensor shape mismatch for " + name + "/" +
                                tensor_name);
            }
        }
    }
    for (Layer<Scalar>* layer : layers) {
        for (TensorRef<Scalar>& p : layer->parameters()) {
            for (Eigen::Index c = 0; c < p.tensor->cols(); ++c) {
                for (Eigen::Index r = 0; r < p.tensor->rows(); ++r) {
                    double v = 0.0;
                    if (!in.read(reinterpret_cast<char*>(&v), sizeof(double))) {
                        throw DataError(path + ": model file truncated");
                    }
                    (*p.tensor)(r, c) = static_cast<Scalar>(v);
                }
            }
        }
    }
}

}  // namespace sentiforge::nn

#endif  // SENTIFORGE_NN_SERIALIZE_HPP

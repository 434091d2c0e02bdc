// Model assembly from a layer spec list.
//
// Stacking semantics: every recurrent layer except the last one in the stack
// returns full sequences; the last returns only its final hidden state, which
// feeds the Dense(1) regression head. Conv1D always emits the (shorter)
// full sequence. The last layer must be Dense(1).

#ifndef SENTIFORGE_NN_MODEL_HPP
#define SENTIFORGE_NN_MODEL_HPP

#include <memory>
#include <string>
#include <vector>

#include "sentiforge/nn/layers.hpp"

namespace sentiforge::nn {

enum class LayerKind { Lstm, Gru, Conv1d, Dense };

struct LayerSpec {
    LayerKind kind = LayerKind::Dense;
    Eigen::Index units = 1;         // units / filters
    Eigen::Index kernel_width = 1;  // conv only

    bool operator==(const LayerSpec&) const = default;
};

struct ModelSpec {
    std::vector<LayerSpec> layers;

    static ModelSpec lstm(Eigen::Index units) {
        return {{{LayerKind::Lstm, units}, {LayerKind::Dense, 1}}};
    }
    static ModelSpec lstm_lstm(Eigen::Index units) {
        return {{{LayerKind::Lstm, units},
                 {LayerKind::Lstm, units},
                 {LayerKind::Dense, 1}}};
    }
    static ModelSpec lstm_gru(Eigen::Index units) {
        return {{{LayerKind::Lstm, units},
                 {LayerKind::Gru, units},
                 {LayerKind::Dense, 1}}};
    }
    static ModelSpec gru(Eigen::Index units) {
        return {{{LayerKind::Gru, units}, {LayerKind::Dense, 1}}};
    }
    static ModelSpec gru_gru(Eigen::Index units) {
        return {{{LayerKind::Gru, units},
                 {LayerKind::Gru, units},
                 {LayerKind::Dense, 1}}};
    }
    static ModelSpec conv1d_lstm(Eigen::Index filters, Eigen::Index kernel_width,
                                 Eigen::Index units) {
        return {{{LayerKind::Conv1d, filters, kernel_width},
                 {LayerKind::Lstm, units},
                 {LayerKind::Dense, 1}}};
    }

    bool operator==(const ModelSpec&) const = default;
};

std::string to_string(LayerKind kind);
LayerKind layer_kind_from_string(const std::string& name);

template <class Scalar>
class SequenceModel {
public:
    SequenceModel(const ModelSpec& spec, Eigen::Index input_dim, Rng& rng)
        : spec_(spec) {
        if (spec.layers.empty() || spec.layers.back().kind != LayerKind::Dense ||
            spec.layers.back().units != 1) {
            throw ConfigError("model spec must end with Dense(1)");
        }
        // Index of the last recurrent layer; only that one collapses the
        // sequence to its final state.
        std::ptrdiff_t last_recurrent = -1;
        for (std::size_t i = 0; i < spec.layers.size(); ++i) {
            const LayerKind kind = spec.layers[i].kind;
            if (kind == LayerKind::Lstm || kind == LayerKind::Gru) {
                last_recurrent = static_cast<std::ptrdiff_t>(i);
            }
        }
        if (last_recurrent < 0) {
            throw ConfigError("model spec needs at least one recurrent layer");
        }

        Eigen::Index dim = input_dim;
        for (std::size_t i = 0; i < spec.layers.size(); ++i) {
            const LayerSpec& layer = spec.layers[i];
            const bool return_sequences =
                static_cast<std::ptrdiff_t>(i) != last_recurrent;
            switch (layer.kind) {
                case LayerKind::Lstm:
                    layers_.push_back(std::make_unique<LstmLayer<Scalar>>(
                        dim, layer.units, return_sequences, rng));
                    break;
                case LayerKind::Gru:
                    layers_.push_back(std::make_unique<GruLayer<Scalar>>(
                        dim, layer.units, return_sequences, rng));
                    break;
                case LayerKind::Conv1d:
                    layers_.push_back(std::make_unique<Conv1dLayer<Scalar>>(
                        dim, layer.units, layer.kernel_width, rng));
                    break;
                case LayerKind::Dense:
                    layers_.push_back(
                        std::make_unique<DenseLayer<Scalar>>(dim, layer.units, rng));
                    break;
            }
            dim = layers_.back()->output_dim();
        }
    }

    // Predictions for a step-major batch, as a [1 x batch] row.
    Mat<Scalar> forward(const Seq<Scalar>& input) {
        Seq<Scalar> activation = input;
        for (auto& layer : layers_) {
            activation = layer->forward(activation);
#ifndef NDEBUG
            for (const Mat<Scalar>& step : activation) {
                require_finite(step, "forward activation");
            }
#endif
        }
        return activation.front();
    }

    // Backpropagates d(loss)/d(prediction) through the stack.
    void backward(const Mat<Scalar>& grad_prediction) {
        Seq<Scalar> grad{grad_prediction};
        for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) {
            grad = (*it)->backward(grad);
#ifndef NDEBUG
            for (const Mat<Scalar>& step : grad) {
                require_finite(step, "backward gradient");
            }
#endif
        }
    }

    void zero_grad() {
        for (auto& layer : layers_) layer->zero_grad();
    }

    std::vector<Layer<Scalar>*> layers() {
        std::vector<Layer<Scalar>*> out;
        for (auto& layer : layers_) out.push_back(layer.get());
        return out;
    }

    const ModelSpec& spec() const { return spec_; }

    Eigen::Index parameter_count() {
        Eigen::Index n = 0;
        for (auto& layer : layers_) n += layer->parameter_count();
        return n;
    }

    std::string describe() const {
        std::string out;
        for (std::size_t i = 0; i < layers_.size(); ++i) {
            if (i) out += " -> ";
            out += layers_[i]->describe();
        }
        return out;
    }

private:
    ModelSpec spec_;
    std::vector<std::unique_ptr<Layer<Scalar>>> layers_;
};

inline std::string to_string(LayerKind kind) {
    switch (kind) {
        case LayerKind::Lstm: return "lstm";
        case LayerKind::Gru: return "gru";
        case LayerKind::Conv1d: return "conv1d";
        case LayerKind::Dense: return "dense";
    }
    return "?";
}

inline LayerKind layer_kind_from_string(const std::string& name) {
    if (name == "lstm") return LayerKind::Lstm;
    if (name == "gru") return LayerKind::Gru;
    if (name == "conv1d") return LayerKind::Conv1d;
    if (name == "dense") return LayerKind::Dense;
    throw ConfigError("unknown layer kind: " + name);
}

}  // namespace sentiforge::nn

#endif  // SENTIFORGE_NN_MODEL_HPP

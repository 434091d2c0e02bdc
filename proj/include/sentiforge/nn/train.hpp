// Mini-batch training with Adam.
//
// The loss minimized is mean squared error over the scaled target; reported
// history entries are its square root (RMSE in scaled space), which shares
// the argmin. Training is single-threaded and bit-deterministic for a fixed
// seed: initialization, batch shuffling and updates all draw from one seeded
// generator.

#ifndef SENTIFORGE_NN_TRAIN_HPP
#define SENTIFORGE_NN_TRAIN_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "sentiforge/dataset.hpp"
#include "sentiforge/nn/metrics.hpp"
#include "sentiforge/nn/model.hpp"

namespace sentiforge::nn {

struct TrainConfig {
    int batch_size = 128;
    int epochs = 5;
    double learning_rate = 1e-3;
    std::uint64_t seed = 42;
    bool shuffle = true;
};

// Adam with bias correction (beta1 0.9, beta2 0.999, eps 1e-8).
template <class Scalar>
class AdamOptimizer {
public:
    explicit AdamOptimizer(double learning_rate)
        : learning_rate_(static_cast<Scalar>(learning_rate)) {}

    void step(SequenceModel<Scalar>& model) {
        ++t_;
        std::size_t slot = 0;
        for (Layer<Scalar>* layer : model.layers()) {
            auto params = layer->parameters();
            auto grads = layer->gradients();
            for (std::size_t i = 0; i < params.size(); ++i, ++slot) {
                Mat<Scalar>& p = *params[i].tensor;
                const Mat<Scalar>& g = *grads[i].tensor;
                if (slot >= m_.size()) {
                    m_.push_back(Mat<Scalar>::Zero(p.rows(), p.cols()));
                    v_.push_back(Mat<Scalar>::Zero(p.rows(), p.cols()));
                }
                m_[slot] = beta1_ * m_[slot] + (1 - beta1_) * g;
                v_[slot] = beta2_ * v_[slot] + (1 - beta2_) * g.cwiseProduct(g);
                const Scalar bias1 = 1 - std::pow(beta1_, static_cast<Scalar>(t_));
                const Scalar bias2 = 1 - std::pow(beta2_, static_cast<Scalar>(t_));
                p.array() -= learning_rate_ * (m_[slot].array() / bias1) /
                             ((v_[slot].array() / bias2).sqrt() + eps_);
            }
        }
    }

private:
    Scalar learning_rate_;
    static constexpr Scalar beta1_ = Scalar(0.9);
    static constexpr Scalar beta2_ = Scalar(0.999);
    static constexpr Scalar eps_ = Scalar(1e-8);
    long t_ = 0;
    std::vector<Mat<Scalar>> m_;
    std::vector<Mat<Scalar>> v_;
};

struct TrainResult {
    std::vector<double> epoch_loss;  // RMSE in scaled target space
};

// Step-major gather converted to the model's scalar type.
template <class Scalar>
Seq<Scalar> gather_as(const dataset::WindowedDataset& ds,
                      const std::vector<Eigen::Index>& samples) {
    const std::vector<Eigen::MatrixXd> steps = ds.gather(samples);
    if constexpr (std::is_same_v<Scalar, double>) {
        return steps;
    } else {
        Seq<Scalar> converted;
        converted.reserve(steps.size());
        for (const Eigen::MatrixXd& s : steps) {
            converted.push_back(s.template cast<Scalar>());
        }
        return converted;
    }
}

// Trains in place. Batches are drawn in shuffled order (seeded); the final
// batch of an epoch may be short. Throws TrainingDiverged when the loss goes
// non-finite.
template <class Scalar>
TrainResult train(SequenceModel<Scalar>& model,
                  const dataset::WindowedDataset& train_set,
                  const TrainConfig& config) {
    if (config.epochs < 1) throw ConfigError("epochs must be >= 1");
    if (config.batch_size < 1) throw ConfigError("batch size must be >= 1");
    if (train_set.n_samples() == 0) throw ConfigError("training set is empty");

    Rng rng(config.seed);
    AdamOptimizer<Scalar> optimizer(config.learning_rate);
    TrainResult result;

    std::vector<Eigen::Index> order(static_cast<std::size_t>(train_set.n_samples()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        if (config.shuffle) std::shuffle(order.begin(), order.end(), rng);
        double squared_error_sum = 0.0;
        Eigen::Index seen = 0;

        for (std::size_t begin = 0; begin < order.size();
             begin += static_cast<std::size_t>(config.batch_size)) {
            const std::size_t end = std::min(
                begin + static_cast<std::size_t>(config.batch_size), order.size());
            const std::vector<Eigen::Index> batch(order.begin() + begin,
                                                  order.begin() + end);

            const Seq<Scalar> inputs = gather_as<Scalar>(train_set, batch);
            const Eigen::VectorXd targets = train_set.gather_targets(batch);

            model.zero_grad();
            Mat<Scalar> pred = model.forward(inputs);
            const Eigen::Index n = pred.cols();

            Mat<Scalar> diff(1, n);
            for (Eigen::Index j = 0; j < n; ++j) {
                diff(0, j) = pred(0, j) - static_cast<Scalar>(targets[j]);
            }
            const double batch_se = static_cast<double>(diff.squaredNorm());
            if (!std::isfinite(batch_se)) {
                throw TrainingDiverged(
                    "loss became non-finite at epoch " + std::to_string(epoch + 1) +
                    " (try a lower learning rate)");
            }
            squared_error_sum += batch_se;
            seen += n;

            // d(MSE)/d(pred) = 2 * diff / n
            Mat<Scalar> grad = diff * (Scalar(2) / static_cast<Scalar>(n));
            model.backward(grad);
            optimizer.step(model);
        }
        result.epoch_loss.push_back(
            std::sqrt(squared_error_sum / static_cast<double>(seen)));
    }
    return result;
}

// Predictions over a whole dataset in evaluation batches, inverted to
// unscaled target units.
template <class Scalar>
Eigen::VectorXd predict_unscaled(SequenceModel<Scalar>& model,
                                 const dataset::WindowedDataset& ds,
                                 int batch_size = 128) {
    Eigen::VectorXd scaled(ds.n_samples());
    for (Eigen::Index begin = 0; begin < ds.n_samples(); begin += batch_size) {
        const Eigen::Index end = std::min<Eigen::Index>(begin + batch_size,
                                                        ds.n_samples());
        std::vector<Eigen::Index> batch;
        batch.reserve(static_cast<std::size_t>(end - begin));
        for (Eigen::Index i = begin; i < end; ++i) batch.push_back(i);
        Mat<Scalar> pred = model.forward(gather_as<Scalar>(ds, batch));
        for (Eigen::Index i = begin; i < end; ++i) {
            scaled[i] = static_cast<double>(pred(0, i - begin));
        }
    }
    return dataset::invert_target_scaler(ds.scaler(), scaled);
}

// Actual (unscaled) targets of a dataset.
inline Eigen::VectorXd actual_unscaled(const dataset::WindowedDataset& ds) {
    Eigen::VectorXd scaled(ds.n_samples());
    for (Eigen::Index i = 0; i < ds.n_samples(); ++i) scaled[i] = ds.target_of(i);
    return dataset::invert_target_scaler(ds.scaler(), scaled);
}

}  // namespace sentiforge::nn

#endif  // SENTIFORGE_NN_TRAIN_HPP

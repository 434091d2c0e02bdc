// Error metrics, computed in whatever units the caller passes (the pipeline
// always evaluates in unscaled USD).

#ifndef SENTIFORGE_NN_METRICS_HPP
#define SENTIFORGE_NN_METRICS_HPP

#include <cmath>

#include "sentiforge/nn/core.hpp"

namespace sentiforge::nn {

template <class Scalar>
Scalar rmse(const Vec<Scalar>& predicted, const Vec<Scalar>& actual) {
    if (predicted.size() != actual.size()) {
        throw ConfigError("rmse: length mismatch (" +
                          std::to_string(predicted.size()) + " vs " +
                          std::to_string(actual.size()) + ")");
    }
    if (predicted.size() == 0) throw ConfigError("rmse: empty input");
    return std::sqrt((predicted - actual).squaredNorm() /
                     static_cast<Scalar>(predicted.size()));
}

template <class Scalar>
Scalar mae(const Vec<Scalar>& predicted, const Vec<Scalar>& actual) {
    if (predicted.size() != actual.size()) {
        throw ConfigError("mae: length mismatch (" +
                          std::to_string(predicted.size()) + " vs " +
                          std::to_string(actual.size()) + ")");
    }
    if (predicted.size() == 0) throw ConfigError("mae: empty input");
    return (predicted - actual).template lpNorm<1>() /
           static_cast<Scalar>(predicted.size());
}

struct Metrics {
    double train_rmse = 0.0;
    double test_rmse = 0.0;
    double train_mae = 0.0;
    double test_mae = 0.0;
};

}  // namespace sentiforge::nn

#endif  // SENTIFORGE_NN_METRICS_HPP

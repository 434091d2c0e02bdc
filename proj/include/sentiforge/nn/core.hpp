// Core types for the sequence-model engine.
//
// A sequence batch is time-major: element t of a Seq is the [features x
// batch] activation matrix at step t. Everything is templated on the scalar
// type; the pipeline instantiates double (64-bit floats throughout).

#ifndef SENTIFORGE_NN_CORE_HPP
#define SENTIFORGE_NN_CORE_HPP

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sentiforge/common.hpp"

namespace sentiforge::nn {

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar>
using Seq = std::vector<Mat<Scalar>>;

using Rng = std::mt19937_64;

// Named view of one parameter (or gradient) tensor inside a layer.
template <class Scalar>
struct TensorRef {
    std::string name;
    Mat<Scalar>* tensor;
};

template <class Scalar>
inline Scalar sigmoid(Scalar x) {
    return Scalar(1) / (Scalar(1) + std::exp(-x));
}

// Uniform Glorot-style init: +/- sqrt(6 / (fan_in + fan_out)).
template <class Scalar>
void glorot_uniform(Mat<Scalar>& m, Eigen::Index fan_in, Eigen::Index fan_out,
                    Rng& rng) {
    const Scalar limit =
        std::sqrt(Scalar(6) / static_cast<Scalar>(fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-static_cast<double>(limit),
                                                static_cast<double>(limit));
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            m(r, c) = static_cast<Scalar>(dist(rng));
        }
    }
}

template <class Scalar>
void require_finite(const Mat<Scalar>& m, const char* where) {
    if (!m.allFinite()) {
        throw TrainingDiverged(std::string("non-finite values in ") + where);
    }
}

inline void require_shape(Eigen::Index got_rows, Eigen::Index want_rows,
                          const char* where) {
    if (got_rows != want_rows) {
        throw ConfigError(std::string(where) + ": expected " +
                          std::to_string(want_rows) + " rows, got " +
                          std::to_string(got_rows));
    }
}

}  // namespace sentiforge::nn

#endif  // SENTIFORGE_NN_CORE_HPP

// Sequence layers with full backpropagation through time.
//
// Each layer caches its forward activations; backward() consumes the
// upstream gradient, accumulates parameter gradients (call zero_grad first)
// and returns the gradient with respect to its input sequence. Recurrent
// layers start from zero state. A recurrent layer built with
// return_sequences=false emits a length-1 sequence holding the final hidden
// state, and accepts the matching length-1 upstream gradient.

#ifndef SENTIFORGE_NN_LAYERS_HPP
#define SENTIFORGE_NN_LAYERS_HPP

#include <memory>
#include <string>
#include <vector>

#include "sentiforge/nn/core.hpp"

namespace sentiforge::nn {

template <class Scalar>
class Layer {
public:
    virtual ~Layer() = default;

    virtual Seq<Scalar> forward(const Seq<Scalar>& input) = 0;
    virtual Seq<Scalar> backward(const Seq<Scalar>& grad_output) = 0;

    virtual std::vector<TensorRef<Scalar>> parameters() = 0;
    virtual std::vector<TensorRef<Scalar>> gradients() = 0;

    virtual std::string describe() const = 0;
    virtual Eigen::Index output_dim() const = 0;

    void zero_grad() {
        for (TensorRef<Scalar>& g : gradients()) g.tensor->setZero();
    }

    Eigen::Index parameter_count() {
        Eigen::Index n = 0;
        for (TensorRef<Scalar>& p : parameters()) n += p.tensor->size();
        return n;
    }
};

// ---------------------------------------------------------------------------

template <class Scalar>
class LstmLayer final : public Layer<Scalar> {
public:
    // Gate rows stacked [input; forget; cell; output]. Forget-gate bias
    // starts at 1.
    LstmLayer(Eigen::Index input_dim, Eigen::Index units, bool return_sequences,
              Rng& rng)
        : input_dim_(input_dim), units_(units), return_sequences_(return_sequences) {
        w_.resize(4 * units, input_dim);
        u_.resize(4 * units, units);
        b_ = Mat<Scalar>::Zero(4 * units, 1);
        glorot_uniform(w_, input_dim, units, rng);
        glorot_uniform(u_, units, units, rng);
        b_.block(units, 0, units, 1).setOnes();
        dw_ = Mat<Scalar>::Zero(w_.rows(), w_.cols());
        du_ = Mat<Scalar>::Zero(u_.rows(), u_.cols());
        db_ = Mat<Scalar>::Zero(b_.rows(), 1);
    }

    Seq<Scalar> forward(const Seq<Scalar>& input) override {
        const Eigen::Index steps = static_cast<Eigen::Index>(input.size());
        if (steps == 0) throw ConfigError("lstm: empty input sequence");
        require_shape(input.front().rows(), input_dim_, "lstm input");
        const Eigen::Index batch = input.front().cols();

        x_ = input;
        i_.assign(steps, {});
        f_.assign(steps, {});
        g_.assign(steps, {});
        o_.assign(steps, {});
        c_.assign(steps, {});
        h_.assign(steps, {});

        Mat<Scalar> h_prev = Mat<Scalar>::Zero(units_, batch);
        Mat<Scalar> c_prev = Mat<Scalar>::Zero(units_, batch);
        for (Eigen::Index t = 0; t < steps; ++t) {
            Mat<Scalar> z = ((w_ * input[t] + u_ * h_prev).colwise() + b_.col(0));
            i_[t] = z.topRows(units_).unaryExpr([](Scalar v) { return sigmoid(v); });
            f_[t] = z.block(units_, 0, units_, batch)
                        .unaryExpr([](Scalar v) { return sigmoid(v); });
            g_[t] = z.block(2 * units_, 0, units_, batch).array().tanh().matrix();
            o_[t] = z.block(3 * units_, 0, units_, batch)
                        .unaryExpr([](Scalar v) { return sigmoid(v); });
            c_[t] = f_[t].cwiseProduct(c_prev) + i_[t].cwiseProduct(g_[t]);
            h_[t] = o_[t].cwiseProduct(c_[t].array().tanh().matrix());
            h_prev = h_[t];
            c_prev = c_[t];
        }
        if (return_sequences_) return h_;
        return Seq<Scalar>{h_.back()};
    }

    Seq<Scalar> backward(const Seq<Scalar>& grad_output) override {
        const Eigen::Index steps = static_cast<Eigen::Index>(x_.size());
        const Eigen::Index batch = x_.front().cols();
        Seq<Scalar> grad_input(steps);

        Mat<Scalar> dh_next = Mat<Scalar>::Zero(units_, batch);
        Mat<Scalar> dc_next = Mat<Scalar>::Zero(units_, batch);
        for (Eigen::Index t = steps - 1; t >= 0; --t) {
            Mat<Scalar> dh = dh_next;
            if (return_sequences_) {
                dh += grad_output[t];
            } else if (t == steps - 1) {
                dh += grad_output[0];
            }
            const Mat<Scalar> tanh_c = c_[t].array().tanh().matrix();
            const Mat<Scalar> d_o = dh.cwiseProduct(tanh_c);
            Mat<Scalar> dc =
                dh.cwiseProduct(o_[t])
                    .cwiseProduct((1 - tanh_c.array().square()).matrix()) +
                dc_next;

            const Mat<Scalar> c_prev =
                t > 0 ? c_[t - 1] : Mat<Scalar>::Zero(units_, batch);
            const Mat<Scalar> h_prev =
                t > 0 ? h_[t - 1] : Mat<Scalar>::Zero(units_, batch);

            Mat<Scalar> dz(4 * units_, batch);
            // d(pre-activation) for each gate
            dz.topRows(units_) =
                dc.cwiseProduct(g_[t]).cwiseProduct(i_[t]).cwiseProduct(
                    (1 - i_[t].array()).matrix());
            dz.block(units_, 0, units_, batch) =
                dc.cwiseProduct(c_prev).cwiseProduct(f_[t]).cwiseProduct(
                    (1 - f_[t].array()).matrix());
            dz.block(2 * units_, 0, units_, batch) =
                dc.cwiseProduct(i_[t]).cwiseProduct(
                    (1 - g_[t].array().square()).matrix());
            dz.block(3 * units_, 0, units_, batch) =
                d_o.cwiseProduct(o_[t]).cwiseProduct((1 - o_[t].array()).matrix());

            dw_ += dz * x_[t].transpose();
            du_ += dz * h_prev.transpose();
            db_ += dz.rowwise().sum();

            grad_input[t] = w_.transpose() * dz;
            dh_next = u_.transpose() * dz;
            dc_next = dc.cwiseProduct(f_[t]);
        }
        return grad_input;
    }

    std::vector<TensorRef<Scalar>> parameters() override {
        return {{"w", &w_}, {"u", &u_}, {"b", &b_}};
    }
    std::vector<TensorRef<Scalar>> gradients() override {
        return {{"w", &dw_}, {"u", &du_}, {"b", &db_}};
    }

    std::string describe() const override {
        return "lstm(" + std::to_string(units_) + ")";
    }
    Eigen::Index output_dim() const override { return units_; }

private:
    Eigen::Index input_dim_;
    Eigen::Index units_;
    bool return_sequences_;
    Mat<Scalar> w_, u_, b_;
    Mat<Scalar> dw_, du_, db_;
    Seq<Scalar> x_, i_, f_, g_, o_, c_, h_;
};

// ---------------------------------------------------------------------------

template <class Scalar>
class GruLayer final : public Layer<Scalar> {
public:
    // Gate rows stacked [update; reset; candidate]; the reset gate scales
    // the previous state inside the candidate (h = z*h_prev + (1-z)*cand).
    GruLayer(Eigen::Index input_dim, Eigen::Index units, bool return_sequences,
             Rng& rng)
        : input_dim_(input_dim), units_(units), return_sequences_(return_sequences) {
        w_.resize(3 * units, input_dim);
        u_.resize(3 * units, units);
        b_ = Mat<Scalar>::Zero(3 * units, 1);
        glorot_uniform(w_, input_dim, units, rng);
        glorot_uniform(u_, units, units, rng);
        dw_ = Mat<Scalar>::Zero(w_.rows(), w_.cols());
        du_ = Mat<Scalar>::Zero(u_.rows(), u_.cols());
        db_ = Mat<Scalar>::Zero(b_.rows(), 1);
    }

    Seq<Scalar> forward(const Seq<Scalar>& input) override {
        const Eigen::Index steps = static_cast<Eigen::Index>(input.size());
        if (steps == 0) throw ConfigError("gru: empty input sequence");
        require_shape(input.front().rows(), input_dim_, "gru input");
        const Eigen::Index batch = input.front().cols();

        x_ = input;
        z_.assign(steps, {});
        r_.assign(steps, {});
        cand_.assign(steps, {});
        h_.assign(steps, {});

        Mat<Scalar> h_prev = Mat<Scalar>::Zero(units_, batch);
        for (Eigen::Index t = 0; t < steps; ++t) {
            const Mat<Scalar> zx = w_ * input[t];
            const Mat<Scalar> zh = u_.topRows(2 * units_) * h_prev;
            z_[t] = (zx.topRows(units_) + zh.topRows(units_) +
                     b_.topRows(units_).col(0).replicate(1, batch))
                        .unaryExpr([](Scalar v) { return sigmoid(v); });
            r_[t] = (zx.block(units_, 0, units_, batch) +
                     zh.block(units_, 0, units_, batch) +
                     b_.block(units_, 0, units_, 1).col(0).replicate(1, batch))
                        .unaryExpr([](Scalar v) { return sigmoid(v); });
            const Mat<Scalar> gated = r_[t].cwiseProduct(h_prev);
            cand_[t] = (zx.block(2 * units_, 0, units_, batch) +
                        u_.block(2 * units_, 0, units_, units_) * gated +
                        b_.block(2 * units_, 0, units_, 1).col(0).replicate(1, batch))
                           .array()
                           .tanh()
                           .matrix();
            h_[t] = z_[t].cwiseProduct(h_prev) +
                    (1 - z_[t].array()).matrix().cwiseProduct(cand_[t]);
            h_prev = h_[t];
        }
        if (return_sequences_) return h_;
        return Seq<Scalar>{h_.back()};
    }

    Seq<Scalar> backward(const Seq<Scalar>& grad_output) override {
        const Eigen::Index steps = static_cast<Eigen::Index>(x_.size());
        const Eigen::Index batch = x_.front().cols();
        Seq<Scalar> grad_input(steps);

        Mat<Scalar> dh_next = Mat<Scalar>::Zero(units_, batch);
        for (Eigen::Index t = steps - 1; t >= 0; --t) {
            Mat<Scalar> dh = dh_next;
            if (return_sequences_) {
                dh += grad_output[t];
            } else if (t == steps - 1) {
                dh += grad_output[0];
            }
            const Mat<Scalar> h_prev =
                t > 0 ? h_[t - 1] : Mat<Scalar>::Zero(units_, batch);

            const Mat<Scalar> dz_gate = dh.cwiseProduct(h_prev - cand_[t]);
            const Mat<Scalar> dcand =
                dh.cwiseProduct((1 - z_[t].array()).matrix());

            Mat<Scalar> dz(3 * units_, batch);
            dz.topRows(units_) = dz_gate.cwiseProduct(z_[t]).cwiseProduct(
                (1 - z_[t].array()).matrix());
            dz.block(2 * units_, 0, units_, batch) =
                dcand.cwiseProduct((1 - cand_[t].array().square()).matrix());

            const Mat<Scalar> d_gated =
                u_.block(2 * units_, 0, units_, units_).transpose() *
                dz.block(2 * units_, 0, units_, batch);
            const Mat<Scalar> dr = d_gated.cwiseProduct(h_prev);
            dz.block(units_, 0, units_, batch) =
                dr.cwiseProduct(r_[t]).cwiseProduct((1 - r_[t].array()).matrix());

            dw_ += dz * x_[t].transpose();
            du_.topRows(2 * units_) +=
                dz.topRows(2 * units_) * h_prev.transpose();
            du_.block(2 * units_, 0, units_, units_) +=
                dz.block(2 * units_, 0, units_, batch) *
                r_[t].cwiseProduct(h_prev).transpose();
            db_ += dz.rowwise().sum();

            grad_input[t] = w_.transpose() * dz;
            dh_next = dh.cwiseProduct(z_[t]) + d_gated.cwiseProduct(r_[t]) +
                      u_.topRows(2 * units_).transpose() * dz.topRows(2 * units_);
        }
        return grad_input;
    }

    std::vector<TensorRef<Scalar>> parameters() override {
        return {{"w", &w_}, {"u", &u_}, {"b", &b_}};
    }
    std::vector<TensorRef<Scalar>> gradients() override {
        return {{"w", &dw_}, {"u", &du_}, {"b", &db_}};
    }

    std::string describe() const override {
        return "gru(" + std::to_string(units_) + ")";
    }
    Eigen::Index output_dim() const override { return units_; }

private:
    Eigen::Index input_dim_;
    Eigen::Index units_;
    bool return_sequences_;
    Mat<Scalar> w_, u_, b_;
    Mat<Scalar> dw_, du_, db_;
    Seq<Scalar> x_, z_, r_, cand_, h_;
};

// ---------------------------------------------------------------------------

template <class Scalar>
class Conv1dLayer final : public Layer<Scalar> {
public:
    // Valid cross-correlation along time, linear activation. The kernel is
    // stored tap-major: column block k holds the [filters x features] taps
    // applied to step t + k.
    Conv1dLayer(Eigen::Index input_dim, Eigen::Index filters,
                Eigen::Index kernel_width, Rng& rng)
        : input_dim_(input_dim), filters_(filters), kernel_(kernel_width) {
        if (kernel_width < 1) throw ConfigError("conv1d: kernel width must be >= 1");
        w_.resize(filters, kernel_ * input_dim);
        glorot_uniform(w_, kernel_ * input_dim, filters, rng);
        b_ = Mat<Scalar>::Zero(filters, 1);
        dw_ = Mat<Scalar>::Zero(w_.rows(), w_.cols());
        db_ = Mat<Scalar>::Zero(b_.rows(), 1);
    }

    Seq<Scalar> forward(const Seq<Scalar>& input) override {
        const Eigen::Index steps = static_cast<Eigen::Index>(input.size());
        require_shape(input.empty() ? 0 : input.front().rows(), input_dim_,
                      "conv1d input");
        if (steps < kernel_) {
            throw ConfigError("conv1d: kernel width " + std::to_string(kernel_) +
                              " exceeds sequence length " + std::to_string(steps));
        }
        x_ = input;
        const Eigen::Index batch = input.front().cols();
        const Eigen::Index out_steps = steps - kernel_ + 1;
        Seq<Scalar> output(out_steps);
        for (Eigen::Index t = 0; t < out_steps; ++t) {
            Mat<Scalar> y = b_.col(0).replicate(1, batch);
            for (Eigen::Index k = 0; k < kernel_; ++k) {
                y += w_.block(0, k * input_dim_, filters_, input_dim_) * input[t + k];
            }
            output[t] = std::move(y);
        }
        out_steps_ = out_steps;
        return output;
    }

    Seq<Scalar> backward(const Seq<Scalar>& grad_output) override {
        const Eigen::Index steps = static_cast<Eigen::Index>(x_.size());
        const Eigen::Index batch = x_.front().cols();
        Seq<Scalar> grad_input(steps, Mat<Scalar>::Zero(input_dim_, batch));
        for (Eigen::Index t = 0; t < out_steps_; ++t) {
            const Mat<Scalar>& dy = grad_output[t];
            db_ += dy.rowwise().sum();
            for (Eigen::Index k = 0; k < kernel_; ++k) {
                dw_.block(0, k * input_dim_, filters_, input_dim_) +=
                    dy * x_[t + k].transpose();
                grad_input[t + k] +=
                    w_.block(0, k * input_dim_, filters_, input_dim_).transpose() * dy;
            }
        }
        return grad_input;
    }

    std::vector<TensorRef<Scalar>> parameters() override {
        return {{"w", &w_}, {"b", &b_}};
    }
    std::vector<TensorRef<Scalar>> gradients() override {
        return {{"w", &dw_}, {"b", &db_}};
    }

    std::string describe() const override {
        return "conv1d(" + std::to_string(filters_) + "," + std::to_string(kernel_) +
               ")";
    }
    Eigen::Index output_dim() const override { return filters_; }

private:
    Eigen::Index input_dim_;
    Eigen::Index filters_;
    Eigen::Index kernel_;
    Eigen::Index out_steps_ = 0;
    Mat<Scalar> w_, b_;
    Mat<Scalar> dw_, db_;
    Seq<Scalar> x_;
};

// ---------------------------------------------------------------------------

template <class Scalar>
class DenseLayer final : public Layer<Scalar> {
public:
    DenseLayer(Eigen::Index input_dim, Eigen::Index units, Rng& rng)
        : input_dim_(input_dim), units_(units) {
        w_.resize(units, input_dim);
        glorot_uniform(w_, input_dim, units, rng);
        b_ = Mat<Scalar>::Zero(units, 1);
        dw_ = Mat<Scalar>::Zero(w_.rows(), w_.cols());
        db_ = Mat<Scalar>::Zero(b_.rows(), 1);
    }

    Seq<Scalar> forward(const Seq<Scalar>& input) override {
        if (input.size() != 1) {
            throw ConfigError("dense: expected a single-step input, got " +
                              std::to_string(input.size()) + " steps");
        }
        require_shape(input.front().rows(), input_dim_, "dense input");
        x_ = input.front();
        return Seq<Scalar>{(w_ * x_).colwise() + b_.col(0)};
    }

    Seq<Scalar> backward(const Seq<Scalar>& grad_output) override {
        const Mat<Scalar>& dy = grad_output.front();
        dw_ += dy * x_.transpose();
        db_ += dy.rowwise().sum();
        return Seq<Scalar>{w_.transpose() * dy};
    }

    std::vector<TensorRef<Scalar>> parameters() override {
        return {{"w", &w_}, {"b", &b_}};
    }
    std::vector<TensorRef<Scalar>> gradients() override {
        return {{"w", &dw_}, {"b", &db_}};
    }

    std::string describe() const override {
        return "dense(" + std::to_string(units_) + ")";
    }
    Eigen::Index output_dim() const override { return units_; }

private:
    Eigen::Index input_dim_;
    Eigen::Index units_;
    Mat<Scalar> w_, b_;
    Mat<Scalar> dw_, db_;
    Mat<Scalar> x_;
};

}  // namespace sentiforge::nn

#endif  // SENTIFORGE_NN_LAYERS_HPP

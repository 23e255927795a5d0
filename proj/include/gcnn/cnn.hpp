#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gcnn/graph.hpp"
#include "gcnn/tensor.hpp"

namespace gcnn {

/// Architecture: two valid (stride 1, unpadded) ReLU convolutions followed by
/// a fully connected layer with a single output.
struct ModelConfig {
    int input_dim = 50;
    int filter1 = 5;
    int filter2 = 5;
    int channels1 = 8;
    int channels2 = 16;
    bool output_relu = true;

    int side1() const { return input_dim - filter1 + 1; }
    int side2() const { return side1() - filter2 + 1; }
    std::size_t flattened_len() const { return static_cast<std::size_t>(side2()) * side2() * channels2; }

    /// Throws ShapeMismatch unless every layer has a positive output side.
    void validate() const;

    friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

/// Weights are laid out (H, H, C_in, C_out), so they read directly as a
/// (H·H·C_in) × C_out matrix; slice t over the last axis is filter t.
template <typename T>
struct ConvLayer {
    int filter = 0;
    int in_channels = 0;
    int out_channels = 0;
    std::vector<T> weights;
    std::vector<T> bias;

    static ConvLayer zeros(int filter, int in_channels, int out_channels);
    std::size_t fan_in() const { return static_cast<std::size_t>(filter) * filter * in_channels; }
    T& weight(int di, int dj, int c, int t) {
        return weights[((static_cast<std::size_t>(di) * filter + dj) * in_channels + c) * out_channels + t];
    }
    friend bool operator==(const ConvLayer&, const ConvLayer&) = default;
};

/// Flatten order is row-major height, width, channel, matching Tensor3.
template <typename T>
struct DenseLayer {
    std::vector<T> weights;
    T bias{0};
    friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

template <typename T>
struct CnnModel {
    ModelConfig config;
    ConvLayer<T> conv1;
    ConvLayer<T> conv2;
    DenseLayer<T> dense;
    /// Network outputs are multiplied by this to give counts.
    double target_scale = 1.0;

    /// Throws ShapeMismatch if any parameter block disagrees with config.
    void check_shapes() const;
    friend bool operator==(const CnnModel&, const CnnModel&) = default;
};

/// Same layout as the model's parameters.
template <typename T>
struct Gradients {
    ConvLayer<T> conv1;
    ConvLayer<T> conv2;
    DenseLayer<T> dense;
};

/// Visits conv1 weights, conv1 bias, conv2 weights, conv2 bias, dense
/// weights, dense bias, in that order.
template <typename P, typename F>
void for_each_block(P& p, F&& f) {
    f(std::span(p.conv1.weights));
    f(std::span(p.conv1.bias));
    f(std::span(p.conv2.weights));
    f(std::span(p.conv2.bias));
    f(std::span(p.dense.weights));
    f(std::span(&p.dense.bias, 1));
}

/// Fan-in scaled uniform weights in ±sqrt(6 / fan_in), zero biases.
template <typename T>
CnnModel<T> make_model(const ModelConfig& cfg, std::uint64_t seed);

/// Every parameter zero.
template <typename T>
CnnModel<T> zero_model(const ModelConfig& cfg);

template <typename T>
Gradients<T> zero_gradients(const ModelConfig& cfg);

std::size_t parameter_count(const ModelConfig& cfg);

template <typename T>
Tensor3<T> to_tensor(const PaddedMatrix& mx);

/// O[i,j,t] = ReLU(W_t · x[i:i+H-1, j:j+H-1, :] + b_t). Throws ShapeMismatch,
/// NonFiniteValue.
template <typename T>
Tensor3<T> conv_forward(const Tensor3<T>& x, const ConvLayer<T>& layer);

/// ReLU(flatten(x)ᵀ W + b), or the affine value when output_relu is off.
template <typename T>
T dense_forward(const Tensor3<T>& x, const DenseLayer<T>& layer, bool output_relu = true);

/// Network output before target_scale is applied.
template <typename T>
T forward_normalized(const CnnModel<T>& model, const Tensor3<T>& input);

/// Predicted count: forward_normalized times target_scale.
template <typename T>
double forward(const CnnModel<T>& model, const PaddedMatrix& input);

/// Mean of squared differences. Throws EmptyBatch, LengthMismatch.
double mse_loss(std::span<const double> preds, std::span<const double> targets);

template <typename T>
struct BackwardResult {
    double loss = 0.0;
    Gradients<T> grads;
};

/// Gradients of the batch MSE (in normalized target units) with respect to
/// every parameter. Per-sample gradients are summed in batch order, so the
/// result does not depend on `jobs`. ReLU'(0) is taken as 0.
/// Throws EmptyBatch, LengthMismatch, ShapeMismatch, NonFiniteGradient.
template <typename T>
BackwardResult<T> backward(const CnnModel<T>& model, std::span<const Tensor3<T>* const> inputs,
                           std::span<const T> targets, unsigned jobs = 1);

template <typename T>
double batch_loss(const CnnModel<T>& model, std::span<const Tensor3<T>* const> inputs, std::span<const T> targets);

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double dense_lr = 0.0;  // step size for the dense layer; 0 = lr
};

template <typename T>
class Adam {
public:
    Adam(const ModelConfig& cfg, AdamConfig hyper);

    /// One bias-corrected Adam update. Throws NonFiniteGradient.
    void step(CnnModel<T>& model, const Gradients<T>& grads);
    long steps() const { return t_; }
    const AdamConfig& hyper() const { return hyper_; }
    /// Multiplies lr and dense_lr.
    void scale_lr(double f) {
        hyper_.lr *= f;
        hyper_.dense_lr *= f;
    }

private:
    AdamConfig hyper_;
    Gradients<T> m_;
    Gradients<T> v_;
    long t_ = 0;
};

template <typename T>
void optimizer_step(CnnModel<T>& model, const Gradients<T>& grads, Adam<T>& adam) {
    adam.step(model, grads);
}

inline constexpr const char* kFlopsConvention = "flops-v1: mac=2 bias=1 relu=0";

struct FlopsReport {
    std::uint64_t conv1 = 0;
    std::uint64_t conv2 = 0;
    std::uint64_t dense = 0;
    std::uint64_t total = 0;
    std::string convention = kFlopsConvention;
};

/// Per conv layer: side_out²·C_out·(2·H²·C_in) + side_out²·C_out. Dense: 2L + 1.
FlopsReport flops(const ModelConfig& cfg);

template <typename T>
FlopsReport flops(const CnnModel<T>& model) {
    return flops(model.config);
}

}  // namespace gcnn

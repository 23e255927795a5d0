#include "gcnn/cnn.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "gcnn/error.hpp"
#include "gcnn/parallel.hpp"
#include "gcnn/rng.hpp"
#include "gcnn/simd/kernels.hpp"

namespace gcnn {

void ModelConfig::validate() const {
    if (input_dim < 1 || filter1 < 1 || filter2 < 1 || channels1 < 1 || channels2 < 1)
        throw ShapeMismatch("model dimensions must be positive");
    if (side1() < 1 || side2() < 1)
        throw ShapeMismatch("filters too large for input dimension " + std::to_string(input_dim));
}

std::size_t parameter_count(const ModelConfig& cfg) {
    const auto c1 = static_cast<std::size_t>(cfg.filter1) * cfg.filter1 * cfg.channels1 + cfg.channels1;
    const auto c2 = static_cast<std::size_t>(cfg.filter2) * cfg.filter2 * cfg.channels1 * cfg.channels2 + cfg.channels2;
    return c1 + c2 + cfg.flattened_len() + 1;
}

FlopsReport flops(const ModelConfig& cfg) {
    cfg.validate();
    auto conv = [](std::uint64_t side_out, std::uint64_t h, std::uint64_t cin, std::uint64_t cout) {
        const std::uint64_t outputs = side_out * side_out * cout;
        return outputs * (2 * h * h * cin) + outputs;
    };
    FlopsReport r;
    r.conv1 = conv(cfg.side1(), cfg.filter1, 1, cfg.channels1);
    r.conv2 = conv(cfg.side2(), cfg.filter2, cfg.channels1, cfg.channels2);
    r.dense = 2 * static_cast<std::uint64_t>(cfg.flattened_len()) + 1;
    r.total = r.conv1 + r.conv2 + r.dense;
    return r;
}

double mse_loss(std::span<const double> preds, std::span<const double> targets) {
    if (preds.size() != targets.size()) throw LengthMismatch("predictions and targets differ in length");
    if (preds.empty()) throw EmptyBatch("loss of an empty batch");
    double s = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const double d = preds[i] - targets[i];
        s += d * d;
    }
    return s / static_cast<double>(preds.size());
}

template <typename T>
ConvLayer<T> ConvLayer<T>::zeros(int filter, int in_channels, int out_channels) {
    ConvLayer<T> l;
    l.filter = filter;
    l.in_channels = in_channels;
    l.out_channels = out_channels;
    l.weights.assign(static_cast<std::size_t>(filter) * filter * in_channels * out_channels, T{0});
    l.bias.assign(out_channels, T{0});
    return l;
}

namespace {

template <typename T>
void check_conv(const ConvLayer<T>& l, int filter, int cin, int cout, const char* name) {
    if (l.filter != filter || l.in_channels != cin || l.out_channels != cout ||
        l.weights.size() != static_cast<std::size_t>(filter) * filter * cin * cout ||
        l.bias.size() != static_cast<std::size_t>(cout))
        throw ShapeMismatch(std::string(name) + " does not match the model configuration");
}

template <typename T>
bool all_finite(std::span<const T> v) {
    return std::all_of(v.begin(), v.end(), [](T x) { return std::isfinite(x); });
}

// Copies every H×H×C patch of an N×N×C input into a row of `col`; row p is
// output pixel p in row-major order, columns ordered (di, dj, c).
template <typename T>
void im2col(const T* x, int side, int cin, int h, T* col) {
    const int out = side - h + 1;
    const std::size_t row_len = static_cast<std::size_t>(h) * cin;
    const std::size_t k = row_len * h;
    for (int oi = 0; oi < out; ++oi) {
        for (int oj = 0; oj < out; ++oj) {
            T* dst = col + (static_cast<std::size_t>(oi) * out + oj) * k;
            for (int di = 0; di < h; ++di)
                std::memcpy(dst + di * row_len, x + (static_cast<std::size_t>(oi + di) * side + oj) * cin, row_len * sizeof(T));
        }
    }
}

// Adjoint of im2col: scatters patch gradients back onto the input grid.
template <typename T>
void col2im(const T* col, int side, int cin, int h, T* x, const simd::KernelTable<T>& kt) {
    const int out = side - h + 1;
    const int row_len = h * cin;
    const std::size_t k = static_cast<std::size_t>(row_len) * h;
    std::fill(x, x + static_cast<std::size_t>(side) * side * cin, T{0});
    for (int oi = 0; oi < out; ++oi) {
        for (int oj = 0; oj < out; ++oj) {
            const T* src = col + (static_cast<std::size_t>(oi) * out + oj) * k;
            for (int di = 0; di < h; ++di)
                kt.axpy(row_len, T{1}, src + static_cast<std::size_t>(di) * row_len,
                        x + (static_cast<std::size_t>(oi + di) * side + oj) * cin);
        }
    }
}

template <typename T>
void conv_into(const T* x, int side, const ConvLayer<T>& l, T* col, T* out, const simd::KernelTable<T>& kt) {
    const int side_out = side - l.filter + 1;
    const int p = side_out * side_out;
    const int k = static_cast<int>(l.fan_in());
    im2col(x, side, l.in_channels, l.filter, col);
    kt.gemm(p, l.out_channels, k, col, k, l.weights.data(), l.out_channels, out, l.out_channels, false);
    kt.bias_relu(p, l.out_channels, out, l.out_channels, l.bias.data());
}

// Activations of one forward pass, kept for the backward pass.
template <typename T>
struct Workspace {
    std::vector<T> col1, out1, col2, out2;
    std::vector<T> d_out2, dcol2, d_out1;
    T z{0};
    T y{0};

    explicit Workspace(const ModelConfig& c) {
        const auto p1 = static_cast<std::size_t>(c.side1()) * c.side1();
        const auto p2 = static_cast<std::size_t>(c.side2()) * c.side2();
        const auto k1 = static_cast<std::size_t>(c.filter1) * c.filter1;
        const auto k2 = static_cast<std::size_t>(c.filter2) * c.filter2 * c.channels1;
        col1.resize(p1 * k1);
        out1.resize(p1 * c.channels1);
        col2.resize(p2 * k2);
        out2.resize(p2 * c.channels2);
        d_out2.resize(out2.size());
        dcol2.resize(col2.size());
        d_out1.resize(out1.size());
    }
};

template <typename T>
void check_input(const CnnModel<T>& model, const Tensor3<T>& x) {
    const int n = model.config.input_dim;
    if (x.height() != n || x.width() != n || x.channels() != 1)
        throw ShapeMismatch("input is " + std::to_string(x.height()) + "x" + std::to_string(x.width()) + "x" +
                            std::to_string(x.channels()) + ", model expects " + std::to_string(n) + "x" +
                            std::to_string(n) + "x1");
}

template <typename T>
void run_forward(const CnnModel<T>& model, const T* x, Workspace<T>& ws, const simd::KernelTable<T>& kt) {
    const ModelConfig& c = model.config;
    conv_into(x, c.input_dim, model.conv1, ws.col1.data(), ws.out1.data(), kt);
    conv_into(ws.out1.data(), c.side1(), model.conv2, ws.col2.data(), ws.out2.data(), kt);
    ws.z = kt.dot(static_cast<int>(ws.out2.size()), ws.out2.data(), model.dense.weights.data()) + model.dense.bias;
    ws.y = c.output_relu ? std::max(T{0}, ws.z) : ws.z;
}

// Accumulates dL/dparams into g given dL/dz for the sample held in ws.
template <typename T>
void run_backward(const CnnModel<T>& model, const std::vector<T>& w2t, T dz, Workspace<T>& ws, Gradients<T>& g,
                  const simd::KernelTable<T>& kt) {
    const ModelConfig& c = model.config;
    const int p1 = c.side1() * c.side1();
    const int p2 = c.side2() * c.side2();
    const int k1 = static_cast<int>(model.conv1.fan_in());
    const int k2 = static_cast<int>(model.conv2.fan_in());
    const int len = static_cast<int>(ws.out2.size());

    kt.axpy(len, dz, ws.out2.data(), g.dense.weights.data());
    g.dense.bias += dz;

    std::fill(ws.d_out2.begin(), ws.d_out2.end(), T{0});
    kt.axpy(len, dz, model.dense.weights.data(), ws.d_out2.data());
    kt.relu_backward(len, ws.out2.data(), ws.d_out2.data());

    kt.gemm_tn(k2, c.channels2, p2, ws.col2.data(), k2, ws.d_out2.data(), c.channels2, g.conv2.weights.data(),
               c.channels2, true);
    kt.add_rows(p2, c.channels2, ws.d_out2.data(), c.channels2, g.conv2.bias.data());

    kt.gemm(p2, k2, c.channels2, ws.d_out2.data(), c.channels2, w2t.data(), k2, ws.dcol2.data(), k2, false);
    col2im(ws.dcol2.data(), c.side1(), c.channels1, c.filter2, ws.d_out1.data(), kt);
    kt.relu_backward(static_cast<int>(ws.out1.size()), ws.out1.data(), ws.d_out1.data());

    kt.gemm_tn(k1, c.channels1, p1, ws.col1.data(), k1, ws.d_out1.data(), c.channels1, g.conv1.weights.data(),
               c.channels1, true);
    kt.add_rows(p1, c.channels1, ws.d_out1.data(), c.channels1, g.conv1.bias.data());
}

template <typename T>
void add_into(Gradients<T>& total, const Gradients<T>& part) {
    std::vector<std::span<const T>> parts;
    for_each_block(part, [&](auto s) { parts.emplace_back(s.data(), s.size()); });
    std::size_t b = 0;
    for_each_block(total, [&](auto s) {
        const auto src = parts[b++];
        for (std::size_t i = 0; i < s.size(); ++i) s[i] += src[i];
    });
}

template <typename T>
void zero_fill(Gradients<T>& g) {
    for_each_block(g, [](auto s) { std::fill(s.begin(), s.end(), T{0}); });
}

}  // namespace

template <typename T>
void CnnModel<T>::check_shapes() const {
    config.validate();
    check_conv(conv1, config.filter1, 1, config.channels1, "conv1");
    check_conv(conv2, config.filter2, config.channels1, config.channels2, "conv2");
    if (dense.weights.size() != config.flattened_len()) throw ShapeMismatch("dense layer length does not match conv2 output");
    if (!(target_scale > 0.0) || !std::isfinite(target_scale)) throw ShapeMismatch("target_scale must be positive");
}

template <typename T>
CnnModel<T> zero_model(const ModelConfig& cfg) {
    cfg.validate();
    CnnModel<T> m;
    m.config = cfg;
    m.conv1 = ConvLayer<T>::zeros(cfg.filter1, 1, cfg.channels1);
    m.conv2 = ConvLayer<T>::zeros(cfg.filter2, cfg.channels1, cfg.channels2);
    m.dense.weights.assign(cfg.flattened_len(), T{0});
    m.dense.bias = T{0};
    return m;
}

template <typename T>
Gradients<T> zero_gradients(const ModelConfig& cfg) {
    const CnnModel<T> m = zero_model<T>(cfg);
    return Gradients<T>{m.conv1, m.conv2, m.dense};
}

template <typename T>
CnnModel<T> make_model(const ModelConfig& cfg, std::uint64_t seed) {
    CnnModel<T> m = zero_model<T>(cfg);
    Rng rng(derive_seed(seed, "init"));
    auto fill = [&](std::vector<T>& w, std::size_t fan_in) {
        const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
        for (T& x : w) x = static_cast<T>(rng.uniform(-bound, bound));
    };
    fill(m.conv1.weights, m.conv1.fan_in());
    fill(m.conv2.weights, m.conv2.fan_in());
    fill(m.dense.weights, cfg.flattened_len());
    return m;
}

template <typename T>
Tensor3<T> to_tensor(const PaddedMatrix& mx) {
    Tensor3<T> t(mx.dim(), mx.dim(), 1);
    const auto v = mx.values();
    std::transform(v.begin(), v.end(), t.data(), [](std::uint8_t b) { return static_cast<T>(b); });
    return t;
}

template <typename T>
Tensor3<T> conv_forward(const Tensor3<T>& x, const ConvLayer<T>& layer) {
    if (x.height() != x.width()) throw ShapeMismatch("convolution input must be square");
    if (x.channels() != layer.in_channels) throw ShapeMismatch("input channels do not match the layer");
    if (x.height() < layer.filter) throw ShapeMismatch("input smaller than the filter");
    check_conv(layer, layer.filter, layer.in_channels, layer.out_channels, "convolution layer");
    if (!all_finite(x.values())) throw NonFiniteValue("convolution input");
    const int side_out = x.height() - layer.filter + 1;
    Tensor3<T> out(side_out, side_out, layer.out_channels);
    std::vector<T> col(static_cast<std::size_t>(side_out) * side_out * layer.fan_in());
    conv_into(x.data(), x.height(), layer, col.data(), out.data(), simd::kernels<T>());
    return out;
}

template <typename T>
T dense_forward(const Tensor3<T>& x, const DenseLayer<T>& layer, bool output_relu) {
    if (x.size() != layer.weights.size())
        throw ShapeMismatch("flattened length " + std::to_string(x.size()) + " vs " + std::to_string(layer.weights.size()) + " weights");
    if (!all_finite(x.values())) throw NonFiniteValue("dense input");
    const T z = simd::kernels<T>().dot(static_cast<int>(x.size()), x.data(), layer.weights.data()) + layer.bias;
    return output_relu ? std::max(T{0}, z) : z;
}

template <typename T>
T forward_normalized(const CnnModel<T>& model, const Tensor3<T>& input) {
    check_input(model, input);
    Workspace<T> ws(model.config);
    run_forward(model, input.data(), ws, simd::kernels<T>());
    return ws.y;
}

template <typename T>
double forward(const CnnModel<T>& model, const PaddedMatrix& input) {
    return static_cast<double>(forward_normalized(model, to_tensor<T>(input))) * model.target_scale;
}

template <typename T>
BackwardResult<T> backward(const CnnModel<T>& model, std::span<const Tensor3<T>* const> inputs,
                           std::span<const T> targets, unsigned jobs) {
    if (inputs.empty()) throw EmptyBatch("backward on an empty batch");
    if (inputs.size() != targets.size()) throw LengthMismatch("inputs and targets differ in length");
    for (const Tensor3<T>* x : inputs) check_input(model, *x);
    const ModelConfig& c = model.config;
    const auto& kt = simd::kernels<T>();

    // W2 transposed to C2 × K2 for the patch-gradient product.
    const int k2 = static_cast<int>(model.conv2.fan_in());
    std::vector<T> w2t(model.conv2.weights.size());
    for (int r = 0; r < k2; ++r)
        for (int t = 0; t < c.channels2; ++t)
            w2t[static_cast<std::size_t>(t) * k2 + r] = model.conv2.weights[static_cast<std::size_t>(r) * c.channels2 + t];

    const std::size_t batch = inputs.size();
    const T scale = T{2} / static_cast<T>(batch);
    BackwardResult<T> result{0.0, zero_gradients<T>(c)};
    std::vector<double> sq(batch, 0.0);

    auto sample = [&](std::size_t i, Workspace<T>& ws, Gradients<T>& g) {
        run_forward(model, inputs[i]->data(), ws, kt);
        const double diff = static_cast<double>(ws.y) - static_cast<double>(targets[i]);
        sq[i] = diff * diff;
        T dz = scale * (ws.y - targets[i]);
        if (c.output_relu && !(ws.z > T{0})) dz = T{0};
        run_backward(model, w2t, dz, ws, g, kt);
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(batch)));
    if (workers == 1) {
        Workspace<T> ws(c);
        Gradients<T> g = zero_gradients<T>(c);
        for (std::size_t i = 0; i < batch; ++i) {
            zero_fill(g);
            sample(i, ws, g);
            add_into(result.grads, g);
        }
    } else {
        std::vector<Gradients<T>> per(batch, zero_gradients<T>(c));
        std::vector<Workspace<T>> spaces(workers, Workspace<T>(c));
        const std::size_t chunk = (batch + workers - 1) / workers;
        parallel_for(workers, workers, [&](std::size_t w) {
            for (std::size_t i = w * chunk; i < std::min(batch, (w + 1) * chunk); ++i) sample(i, spaces[w], per[i]);
        });
        for (const auto& g : per) add_into(result.grads, g);
    }

    double loss = 0.0;
    for (double s : sq) loss += s;
    result.loss = loss / static_cast<double>(batch);
    bool finite = true;
    for_each_block(result.grads, [&](auto s) { finite = finite && all_finite<T>(s); });
    if (!finite) throw NonFiniteGradient("gradient contains NaN or Inf");
    return result;
}

template <typename T>
double batch_loss(const CnnModel<T>& model, std::span<const Tensor3<T>* const> inputs, std::span<const T> targets) {
    if (inputs.size() != targets.size()) throw LengthMismatch("inputs and targets differ in length");
    if (inputs.empty()) throw EmptyBatch("loss of an empty batch");
    Workspace<T> ws(model.config);
    double s = 0.0;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        check_input(model, *inputs[i]);
        run_forward(model, inputs[i]->data(), ws, simd::kernels<T>());
        const double d = static_cast<double>(ws.y) - static_cast<double>(targets[i]);
        s += d * d;
    }
    return s / static_cast<double>(inputs.size());
}

template <typename T>
Adam<T>::Adam(const ModelConfig& cfg, AdamConfig hyper)
    : hyper_(hyper), m_(zero_gradients<T>(cfg)), v_(zero_gradients<T>(cfg)) {}

template <typename T>
void Adam<T>::step(CnnModel<T>& model, const Gradients<T>& grads) {
    std::vector<std::span<const T>> g;
    for_each_block(grads, [&](auto s) { g.emplace_back(s.data(), s.size()); });
    for (const auto& s : g)
        if (!all_finite<T>(s)) throw NonFiniteGradient("optimizer received a non-finite gradient");
    std::vector<std::span<T>> m, v;
    for_each_block(m_, [&](auto s) { m.push_back(s); });
    for_each_block(v_, [&](auto s) { v.push_back(s); });

    ++t_;
    const double c1 = 1.0 - std::pow(hyper_.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(hyper_.beta2, static_cast<double>(t_));
    const T b1 = static_cast<T>(hyper_.beta1);
    const T b2 = static_cast<T>(hyper_.beta2);
    const T conv_lr = static_cast<T>(hyper_.lr);
    const T dense_lr = static_cast<T>(hyper_.dense_lr > 0.0 ? hyper_.dense_lr : hyper_.lr);
    const T eps = static_cast<T>(hyper_.eps);
    const T inv_c1 = static_cast<T>(1.0 / c1);
    const T inv_c2 = static_cast<T>(1.0 / c2);

    std::size_t b = 0;
    for_each_block(model, [&](auto p) {
        const auto gb = g[b];
        auto mb = m[b];
        auto vb = v[b];
        const T lr = b >= 4 ? dense_lr : conv_lr;
        ++b;
        for (std::size_t i = 0; i < p.size(); ++i) {
            mb[i] = b1 * mb[i] + (T{1} - b1) * gb[i];
            vb[i] = b2 * vb[i] + (T{1} - b2) * gb[i] * gb[i];
            const T m_hat = mb[i] * inv_c1;
            const T v_hat = vb[i] * inv_c2;
            p[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
        }
    });
}

#define GCNN_INSTANTIATE(T)                                                                                      \
    template struct ConvLayer<T>;                                                                                \
    template struct CnnModel<T>;                                                                                 \
    template class Adam<T>;                                                                                      \
    template CnnModel<T> make_model<T>(const ModelConfig&, std::uint64_t);                                       \
    template CnnModel<T> zero_model<T>(const ModelConfig&);                                                      \
    template Gradients<T> zero_gradients<T>(const ModelConfig&);                                                 \
    template Tensor3<T> to_tensor<T>(const PaddedMatrix&);                                                       \
    template Tensor3<T> conv_forward<T>(const Tensor3<T>&, const ConvLayer<T>&);                                 \
    template T dense_forward<T>(const Tensor3<T>&, const DenseLayer<T>&, bool);                                  \
    template T forward_normalized<T>(const CnnModel<T>&, const Tensor3<T>&);                                     \
    template double forward<T>(const CnnModel<T>&, const PaddedMatrix&);                                         \
    template BackwardResult<T> backward<T>(const CnnModel<T>&, std::span<const Tensor3<T>* const>,               \
                                           std::span<const T>, unsigned);                                        \
    template double batch_loss<T>(const CnnModel<T>&, std::span<const Tensor3<T>* const>, std::span<const T>);

GCNN_INSTANTIATE(float)
GCNN_INSTANTIATE(double)

#undef GCNN_INSTANTIATE

}  // namespace gcnn

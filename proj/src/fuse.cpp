#include "ghazal/fuse.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "ghazal/error.hpp"
#include "ghazal/format.hpp"
#include "ghazal/rng.hpp"

namespace ghazal {

FusionInput build_fusion_input(std::span<const double> theta, std::span<const double> embedding, double alpha,
                               const FusionShape& shape, int poem_index) {
    if (!(alpha > 0.0)) fail_usage("fusion: alpha must be > 0");
    if (theta.size() != shape.topics) {
        fail_usage("fusion: theta has length " + std::to_string(theta.size()) + ", expected " +
                   std::to_string(shape.topics));
    }
    if (embedding.size() != shape.embedding_dim) {
        fail_usage("fusion: embedding has length " + std::to_string(embedding.size()) + ", expected " +
                   std::to_string(shape.embedding_dim));
    }
    const double sum = std::accumulate(theta.begin(), theta.end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-6) fail_usage("fusion: theta does not sum to 1");

    FusionInput in;
    in.poem_index = poem_index;
    in.alpha = alpha;
    in.topics = shape.topics;
    in.values.reserve(shape.width());
    for (const double t : theta) in.values.push_back(alpha * t);
    in.values.insert(in.values.end(), embedding.begin(), embedding.end());
    return in;
}

void AutoencoderConfig::validate() const {
    if (hidden_dim == 0) fail_usage("autoencoder: hidden_dim must be >= 1");
    if (epochs < 1) fail_usage("autoencoder: epochs must be >= 1");
    if (batch_size == 0) fail_usage("autoencoder: batch must be >= 1");
    if (!(learning_rate > 0.0)) fail_usage("autoencoder: learning rate must be > 0");
    if (!(clip_norm > 0.0)) fail_usage("autoencoder: clip norm must be > 0");
}

Autoencoder::Autoencoder(std::size_t input_dim, std::size_t hidden_dim)
    : encoder_weights(input_dim * hidden_dim, 0.0),
      encoder_bias(hidden_dim, 0.0),
      decoder_weights(input_dim * hidden_dim, 0.0),
      decoder_bias(input_dim, 0.0),
      input_dim_(input_dim),
      hidden_dim_(hidden_dim) {}

std::vector<double> Autoencoder::encode(std::span<const double> input) const {
    if (input.size() != input_dim_) {
        fail_usage("autoencoder: input has length " + std::to_string(input.size()) + ", model expects " +
                   std::to_string(input_dim_));
    }
    std::vector<double> h(hidden_dim_);
    for (std::size_t j = 0; j < hidden_dim_; ++j) {
        const double* row = &encoder_weights[j * input_dim_];
        double z = encoder_bias[j];
        for (std::size_t i = 0; i < input_dim_; ++i) z += row[i] * input[i];
        h[j] = z > 0.0 ? z : 0.0;
    }
    return h;
}

std::vector<double> Autoencoder::reconstruct(std::span<const double> input) const {
    const auto h = encode(input);
    std::vector<double> y(input_dim_);
    for (std::size_t i = 0; i < input_dim_; ++i) {
        const double* row = &decoder_weights[i * hidden_dim_];
        double v = decoder_bias[i];
        for (std::size_t j = 0; j < hidden_dim_; ++j) v += row[j] * h[j];
        y[i] = v;
    }
    return y;
}

namespace {

// Flat parameter view so Adam and clipping treat every tensor alike.
struct ParamBlock {
    std::vector<double>* values;
    std::vector<double> grad;
    std::vector<double> m;
    std::vector<double> v;

    explicit ParamBlock(std::vector<double>& p)
        : values(&p), grad(p.size(), 0.0), m(p.size(), 0.0), v(p.size(), 0.0) {}
};

}  // namespace

Autoencoder train_autoencoder(std::span<const std::vector<double>> inputs, const AutoencoderConfig& config) {
    config.validate();
    if (inputs.empty()) fail_usage("autoencoder: empty input set");
    const std::size_t D = inputs.front().size();
    const std::size_t H = config.hidden_dim;
    if (D == 0) fail_usage("autoencoder: zero-width inputs");
    for (const auto& x : inputs) {
        if (x.size() != D) fail_usage("autoencoder: inputs have differing widths");
    }

    Autoencoder model(D, H);
    model.seed = config.seed;
    model.batch_size = config.batch_size;

    Rng init_rng(config.seed);
    const double limit = std::sqrt(6.0 / static_cast<double>(D + H));
    for (auto& w : model.encoder_weights) w = init_rng.uniform(-limit, limit);
    for (auto& w : model.decoder_weights) w = init_rng.uniform(-limit, limit);

    std::array<ParamBlock, 4> params{ParamBlock(model.encoder_weights), ParamBlock(model.encoder_bias),
                                     ParamBlock(model.decoder_weights), ParamBlock(model.decoder_bias)};
    auto& g_w1 = params[0].grad;
    auto& g_b1 = params[1].grad;
    auto& g_w2 = params[2].grad;
    auto& g_b2 = params[3].grad;

    Rng shuffle_rng = Rng::derived(config.seed, 1);
    std::vector<std::size_t> order(inputs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    std::vector<double> z(H), h(H), gh(H);
    double beta1_pow = 1.0, beta2_pow = 1.0;

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        shuffle_rng.shuffle(order.begin(), order.end());
        double epoch_loss = 0.0;

        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t end = std::min(order.size(), start + config.batch_size);
            const double B = static_cast<double>(end - start);
            const double scale = 2.0 / (B * static_cast<double>(D));
            for (auto& p : params) std::fill(p.grad.begin(), p.grad.end(), 0.0);

            double batch_sse = 0.0;
            for (std::size_t s = start; s < end; ++s) {
                const auto& x = inputs[order[s]];
                for (std::size_t j = 0; j < H; ++j) {
                    const double* row = &model.encoder_weights[j * D];
                    double acc = model.encoder_bias[j];
                    for (std::size_t i = 0; i < D; ++i) acc += row[i] * x[i];
                    z[j] = acc;
                    h[j] = acc > 0.0 ? acc : 0.0;
                }
                std::fill(gh.begin(), gh.end(), 0.0);
                for (std::size_t i = 0; i < D; ++i) {
                    const double* row = &model.decoder_weights[i * H];
                    double y = model.decoder_bias[i];
                    for (std::size_t j = 0; j < H; ++j) y += row[j] * h[j];
                    const double diff = y - x[i];
                    batch_sse += diff * diff;
                    const double g = scale * diff;
                    g_b2[i] += g;
                    double* grow = &g_w2[i * H];
                    for (std::size_t j = 0; j < H; ++j) {
                        grow[j] += g * h[j];
                        gh[j] += g * row[j];
                    }
                }
                for (std::size_t j = 0; j < H; ++j) {
                    if (z[j] <= 0.0) continue;
                    const double g = gh[j];
                    g_b1[j] += g;
                    double* grow = &g_w1[j * D];
                    for (std::size_t i = 0; i < D; ++i) grow[i] += g * x[i];
                }
            }
            const double batch_loss = batch_sse / (B * static_cast<double>(D));
            if (!std::isfinite(batch_loss)) {
                fail_numeric("autoencoder: loss diverged at epoch " + std::to_string(epoch));
            }
            epoch_loss += batch_loss * B;

            double norm2 = 0.0;
            for (const auto& p : params) {
                for (const double g : p.grad) norm2 += g * g;
            }
            const double norm = std::sqrt(norm2);
            const double clip = norm > config.clip_norm ? config.clip_norm / norm : 1.0;

            beta1_pow *= config.adam_beta1;
            beta2_pow *= config.adam_beta2;
            const double step = config.learning_rate;
            for (auto& p : params) {
                auto& vals = *p.values;
                for (std::size_t i = 0; i < vals.size(); ++i) {
                    const double g = p.grad[i] * clip;
                    p.m[i] = config.adam_beta1 * p.m[i] + (1.0 - config.adam_beta1) * g;
                    p.v[i] = config.adam_beta2 * p.v[i] + (1.0 - config.adam_beta2) * g * g;
                    const double m_hat = p.m[i] / (1.0 - beta1_pow);
                    const double v_hat = p.v[i] / (1.0 - beta2_pow);
                    vals[i] -= step * m_hat / (std::sqrt(v_hat) + config.adam_epsilon);
                }
            }
        }
        const double mean_loss = epoch_loss / static_cast<double>(order.size());
        if (!std::isfinite(mean_loss)) fail_numeric("autoencoder: loss diverged at epoch " + std::to_string(epoch));
        model.loss_log.push_back(mean_loss);
        model.epochs = epoch;
    }
    return model;
}

Autoencoder train_autoencoder(std::span<const FusionInput> inputs, const AutoencoderConfig& config) {
    std::vector<std::vector<double>> raw;
    raw.reserve(inputs.size());
    for (const auto& in : inputs) raw.push_back(in.values);
    return train_autoencoder(std::span<const std::vector<double>>(raw), config);
}

FusedLatent encode(const Autoencoder& model, const FusionInput& input) {
    return {input.poem_index, model.encode(input.values)};
}

namespace {

constexpr std::string_view kAutoencoderMagic = "ghazal-autoencoder 1";

void append_matrix(std::string& out, std::string_view label, const std::vector<double>& data, std::size_t rows,
                   std::size_t cols) {
    out += label;
    out += '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            if (c) out += ' ';
            out += format_roundtrip(data[r * cols + c]);
        }
        out += '\n';
    }
}

}  // namespace

std::string serialize_autoencoder(const Autoencoder& model) {
    const auto D = model.input_dim(), H = model.hidden_dim();
    std::string out(kAutoencoderMagic);
    out += '\n';
    out += "input " + std::to_string(D) + '\n';
    out += "hidden " + std::to_string(H) + '\n';
    out += "seed " + std::to_string(model.seed) + '\n';
    out += "epochs " + std::to_string(model.epochs) + '\n';
    out += "batch " + std::to_string(model.batch_size) + '\n';
    append_matrix(out, "encoder_weights", model.encoder_weights, H, D);
    append_matrix(out, "encoder_bias", model.encoder_bias, 1, H);
    append_matrix(out, "decoder_weights", model.decoder_weights, D, H);
    append_matrix(out, "decoder_bias", model.decoder_bias, 1, D);
    return out;
}

Autoencoder parse_autoencoder(std::string_view text) {
    const auto lines = split_lines(text);
    std::size_t i = 0;
    auto next = [&]() -> std::string_view {
        if (i >= lines.size()) fail_data("autoencoder file: truncated");
        return lines[i++];
    };
    auto field = [&](std::string_view key) {
        const auto f = split_fields(next());
        if (f.size() != 2 || f[0] != key) fail_data("autoencoder file: expected '" + std::string(key) + " <value>'");
        return parse_integer(f[1], "autoencoder " + std::string(key));
    };
    if (next() != kAutoencoderMagic) fail_data("autoencoder file: bad header");
    const auto D = field("input");
    const auto H = field("hidden");
    if (D < 1 || H < 1) fail_data("autoencoder file: dimensions must be >= 1");

    Autoencoder model(static_cast<std::size_t>(D), static_cast<std::size_t>(H));
    model.seed = static_cast<std::uint64_t>(field("seed"));
    model.epochs = static_cast<int>(field("epochs"));
    model.batch_size = static_cast<std::size_t>(field("batch"));

    auto read_matrix = [&](std::string_view label, std::vector<double>& dst, std::size_t rows, std::size_t cols) {
        if (next() != label) fail_data("autoencoder file: expected section '" + std::string(label) + "'");
        for (std::size_t r = 0; r < rows; ++r) {
            const auto f = split_fields(next());
            if (f.size() != cols) fail_data("autoencoder file: row arity mismatch in " + std::string(label));
            for (std::size_t c = 0; c < cols; ++c) dst[r * cols + c] = parse_double(f[c], "autoencoder weight");
        }
    };
    const auto d = static_cast<std::size_t>(D), h = static_cast<std::size_t>(H);
    read_matrix("encoder_weights", model.encoder_weights, h, d);
    read_matrix("encoder_bias", model.encoder_bias, 1, h);
    read_matrix("decoder_weights", model.decoder_weights, d, h);
    read_matrix("decoder_bias", model.decoder_bias, 1, d);
    return model;
}

std::string training_loss_csv(const Autoencoder& model) {
    std::string out = "epoch,loss\n";
    for (std::size_t e = 0; e < model.loss_log.size(); ++e) {
        out += std::to_string(e + 1) + "," + format_significant(model.loss_log[e]) + '\n';
    }
    return out;
}

}  // namespace ghazal

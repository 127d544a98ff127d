#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ghazal {

constexpr double kDefaultFusionAlpha = 15.0;
constexpr std::size_t kDefaultLatentDim = 16;

/// Expected widths of the two halves of a fusion input.
struct FusionShape {
    std::size_t topics = 4;
    std::size_t embedding_dim = 768;

    std::size_t width() const { return topics + embedding_dim; }
};

struct FusionInput {
    int poem_index = 0;
    double alpha = kDefaultFusionAlpha;
    std::size_t topics = 0;
    std::vector<double> values;  // [alpha * theta | embedding]
};

/// [alpha * theta | embedding]. Throws Error(Usage) when alpha <= 0, theta does
/// not sum to 1 within 1e-6, or either part has the wrong width for `shape`.
FusionInput build_fusion_input(std::span<const double> theta, std::span<const double> embedding, double alpha,
                               const FusionShape& shape, int poem_index = 0);

struct AutoencoderConfig {
    std::size_t hidden_dim = kDefaultLatentDim;
    int epochs = 1000;
    std::size_t batch_size = 128;
    double learning_rate = 1e-3;
    double clip_norm = 5.0;  // global gradient-norm clip
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-7;
    std::uint64_t seed = 42;

    void validate() const;
};

struct FusedLatent {
    int poem_index = 0;
    std::vector<double> vector;
};

/// One hidden layer autoencoder: input -> hidden (ReLU) -> input (linear).
class Autoencoder {
public:
    Autoencoder() = default;
    Autoencoder(std::size_t input_dim, std::size_t hidden_dim);

    std::size_t input_dim() const { return input_dim_; }
    std::size_t hidden_dim() const { return hidden_dim_; }

    /// Hidden activation. Throws Error(Usage) on a width mismatch.
    std::vector<double> encode(std::span<const double> input) const;
    std::vector<double> reconstruct(std::span<const double> input) const;

    // Row-major: encoder is hidden x input, decoder is input x hidden.
    std::vector<double> encoder_weights;
    std::vector<double> encoder_bias;
    std::vector<double> decoder_weights;
    std::vector<double> decoder_bias;

    std::vector<double> loss_log;  // mean loss per epoch
    std::uint64_t seed = 0;
    int epochs = 0;
    std::size_t batch_size = 0;

private:
    std::size_t input_dim_ = 0;
    std::size_t hidden_dim_ = 0;
};

/// Mini-batch Adam on mean squared reconstruction error.
///
/// Glorot-uniform weights and zero biases drawn from the seeded generator; a
/// fresh seeded shuffle each epoch with the last partial batch kept. Throws
/// Error(Usage) on empty or ragged input and Error(Numeric) if the loss stops
/// being finite.
Autoencoder train_autoencoder(std::span<const std::vector<double>> inputs, const AutoencoderConfig& config);
Autoencoder train_autoencoder(std::span<const FusionInput> inputs, const AutoencoderConfig& config);

FusedLatent encode(const Autoencoder& model, const FusionInput& input);

std::string serialize_autoencoder(const Autoencoder& model);
Autoencoder parse_autoencoder(std::string_view text);

/// `epoch,loss` rows, epochs numbered from 1.
std::string training_loss_csv(const Autoencoder& model);

}  // namespace ghazal

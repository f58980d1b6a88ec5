#pragma once

#include <span>
#include <string>
#include <vector>

#include "fsosr/episodes.hpp"
#include "fsosr/numerics.hpp"

namespace fsosr {

/// Named view into a flat parameter tensor. Used for SGD updates, checkpoint
/// serialization, and finite-difference sweeps.
struct ParamView {
  std::string name;
  double* data;
  std::size_t size;
};

constexpr double kLeakySlope = 0.01;

/// Plain fully-connected stack: affine layers with a leaky rectifier between
/// them and none after the last.
struct Mlp {
  std::vector<Matrix> weights;
  std::vector<Vector> biases;

  std::size_t in_dim() const { return weights.empty() ? 0 : weights.front().cols; }
  std::size_t out_dim() const { return weights.empty() ? 0 : weights.back().rows; }
};

struct MlpCache {
  std::vector<Vector> inputs;   // input of each layer
  std::vector<Vector> preacts;  // pre-activation of each layer
};

/// widths = {in, hidden..., out}; weights drawn uniform in
/// [-1/sqrt(fan_in), 1/sqrt(fan_in)], biases zero.
Mlp make_mlp(std::span<const std::size_t> widths, Rng& rng);
Mlp zeros_like(const Mlp& m);

Vector mlp_forward(const Mlp& m, const Vector& x);
Vector mlp_forward(const Mlp& m, const Vector& x, MlpCache& cache);
/// Accumulates parameter gradients into `grads` and returns dL/dx.
Vector mlp_backward(const Mlp& m, const MlpCache& cache, const Vector& upstream, Mlp& grads);

/// The feature map applied to raw inputs before any prototype arithmetic.
/// Identity consumes precomputed embeddings as-is; the mlp variant exists to
/// exercise end-to-end training.
struct Encoder {
  enum class Kind { identity, mlp };
  Kind kind = Kind::identity;
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  Mlp mlp;  // kind == mlp
};

Encoder make_identity_encoder(std::size_t dim);
Encoder make_mlp_encoder(std::span<const std::size_t> widths, Rng& rng);
Encoder zeros_like(const Encoder& e);
std::vector<ParamView> encoder_parameters(Encoder& e);

Vector encode(const Encoder& enc, const Vector& x);
/// Backward of encode at x; accumulates into `grads`, returns dL/dx.
Vector encode_backward(const Encoder& enc, const Vector& x, const Vector& upstream,
                       Encoder& grads);

/// One prototype per episode class, ordered by episode class index.
struct PrototypeSet {
  std::vector<Vector> prototypes;
  std::size_t dim = 0;

  std::size_t way() const { return prototypes.size(); }
};

using ClassProbabilities = Vector;

/// Class-wise means of the encoded supports.
PrototypeSet compute_prototypes(const Encoder& enc, const Episode& episode);

/// Distance softmax: probs[c] ∝ exp(-||query - p_c||^2 / temperature).
ClassProbabilities classify(const Vector& query, const PrototypeSet& protos,
                            double temperature);

}  // namespace fsosr

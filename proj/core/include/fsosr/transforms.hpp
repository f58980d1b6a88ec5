#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fsosr/classifier.hpp"
#include "fsosr/numerics.hpp"

namespace fsosr {

enum class HeadKind {
  identity,
  deepsets,
  attention,
  layer_norm,
  instance_norm,
  task_norm,
  ltn,
};

const char* head_kind_name(HeadKind kind);
HeadKind head_kind_from_name(const std::string& name);  // accepts the CLI spellings

/// Residual set function: p_c + g([p_c ; max over the complement of h]).
/// h maps D->D so the concatenation fed to g is 2D wide.
struct DeepSetsParams {
  Mlp h;
  Mlp g;
};

/// Single-head scaled dot-product self-attention over the prototype set with
/// a residual connection and per-row layer normalization on the output.
struct AttentionParams {
  Matrix wq, wk, wv;     // D x D projections
  Vector ln_gain, ln_bias;
};

/// Affine parameters shared by the plain layer/instance normalization heads.
struct NormAffine {
  Vector gain, bias;
};

/// Blends per-dimension support-batch moments with per-prototype moments
/// through a learnable scalar alpha = logistic(alpha_raw).
struct TaskNormParams {
  Vector gain, bias;
  double alpha_raw = 0.0;
};

/// Order-invariant scalar weight in (0,1) from the stacked prototype set:
/// four width-1 convolutions over the feature axis (channel widths
/// D->64->64->32->1) with a mean-pool over the set axis after the second
/// layer, leaky rectifiers in between and a final logistic.
struct WeightGenerator {
  Matrix w1, w2, w3;
  Vector b1, b2, b3;
  Vector w4;
  double b4 = 0.0;
};

struct LtnParams {
  Vector gamma, beta;
  WeightGenerator generator;
};

/// A tagged prototype set-to-set transformation with its learnable
/// parameters. Evaluation never mutates the head.
struct TransformHead {
  HeadKind kind = HeadKind::identity;
  std::size_t dim = 0;
  double epsilon = 1e-5;
  std::variant<std::monostate, DeepSetsParams, AttentionParams, NormAffine, TaskNormParams,
               LtnParams>
      params;
};

/// Freshly initialized head: projection/mlp weights fan-in-scaled uniform,
/// gains 1, biases 0, alpha_raw 0.
TransformHead make_head(HeadKind kind, std::size_t dim, Rng& rng);
/// Same shapes, every learnable parameter zero. Used as a gradient holder.
TransformHead zeros_like(const TransformHead& head);
std::vector<ParamView> head_parameters(TransformHead& head);
std::vector<ParamView> head_parameters_const(const TransformHead& head);

/// Effective task-norm blend weight alpha = logistic(alpha_raw).
double task_norm_alpha(const TransformHead& head);
/// LTN generator output for a stacked set; strictly inside (0,1).
double ltn_weight(const TransformHead& head, const PrototypeSet& protos);

/// Applies the head to a prototype set. task_norm additionally consumes the
/// episode's encoded support features; the other variants ignore them.
PrototypeSet transform(const TransformHead& head, const PrototypeSet& protos,
                       std::span<const Vector> support_features = {});

/// Exact analytic gradients of `transform` for an upstream dL/d(output).
struct TransformGrads {
  TransformHead params;                  // same-shaped gradient accumulator
  std::vector<Vector> inputs;            // dL/d(prototype entries)
  std::vector<Vector> support_features;  // dL/d(support features); task_norm only
};

TransformGrads transform_backward(const TransformHead& head, const PrototypeSet& protos,
                                  const std::vector<Vector>& upstream,
                                  std::span<const Vector> support_features = {});
/// As above but accumulates into an existing gradient holder scaled by
/// `weight` (param gradients += weight * grad).
void transform_backward_accumulate(const TransformHead& head, const PrototypeSet& protos,
                                   const std::vector<Vector>& upstream,
                                   std::span<const Vector> support_features, double weight,
                                   TransformHead& param_grads, std::vector<Vector>& input_grads,
                                   std::vector<Vector>* support_grads);

// Individual forward maps, exposed for direct testing. `transform` dispatches
// to these.
PrototypeSet deepsets_forward(const PrototypeSet& p, const DeepSetsParams& params);
PrototypeSet attention_forward(const PrototypeSet& p, const AttentionParams& params,
                               double epsilon);
PrototypeSet layer_norm_forward(const PrototypeSet& p, const NormAffine& params, double epsilon);
PrototypeSet instance_norm_forward(const PrototypeSet& p, const NormAffine& params,
                                   double epsilon);
PrototypeSet task_norm_forward(const PrototypeSet& p, const TaskNormParams& params,
                               std::span<const Vector> support_features, double epsilon);
PrototypeSet ltn_forward(const PrototypeSet& p, const LtnParams& params, double epsilon);

}  // namespace fsosr

#include "fsosr/classifier.hpp"

#include <cmath>
#include <stdexcept>

namespace fsosr {

Mlp make_mlp(std::span<const std::size_t> widths, Rng& rng) {
  if (widths.size() < 2) throw std::invalid_argument("make_mlp: need at least in/out widths");
  Mlp m;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    Matrix w(widths[l + 1], widths[l]);
    const double bound = 1.0 / std::sqrt(static_cast<double>(widths[l]));
    for (double& v : w.data) v = (2.0 * rng.next_double() - 1.0) * bound;
    m.weights.push_back(std::move(w));
    m.biases.emplace_back(widths[l + 1], 0.0);
  }
  return m;
}

Mlp zeros_like(const Mlp& m) {
  Mlp z;
  for (const auto& w : m.weights) z.weights.emplace_back(w.rows, w.cols);
  for (const auto& b : m.biases) z.biases.emplace_back(b.size(), 0.0);
  return z;
}

namespace {

double leaky(double t) { return t > 0.0 ? t : kLeakySlope * t; }
double leaky_grad(double t) { return t > 0.0 ? 1.0 : kLeakySlope; }

}  // namespace

Vector mlp_forward(const Mlp& m, const Vector& x) {
  MlpCache cache;
  return mlp_forward(m, x, cache);
}

Vector mlp_forward(const Mlp& m, const Vector& x, MlpCache& cache) {
  if (m.weights.empty()) throw std::invalid_argument("mlp_forward: empty mlp");
  if (x.size() != m.in_dim()) throw std::invalid_argument("mlp_forward: input width mismatch");
  cache.inputs.clear();
  cache.preacts.clear();
  Vector z = x;
  for (std::size_t l = 0; l < m.weights.size(); ++l) {
    cache.inputs.push_back(z);
    Vector a = matvec(m.weights[l], z);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += m.biases[l][i];
    cache.preacts.push_back(a);
    if (l + 1 < m.weights.size())
      for (double& v : a) v = leaky(v);
    z = std::move(a);
  }
  return z;
}

Vector mlp_backward(const Mlp& m, const MlpCache& cache, const Vector& upstream, Mlp& grads) {
  Vector dz = upstream;
  for (std::size_t li = m.weights.size(); li-- > 0;) {
    Vector da = std::move(dz);
    if (li + 1 < m.weights.size())
      for (std::size_t i = 0; i < da.size(); ++i) da[i] *= leaky_grad(cache.preacts[li][i]);
    add_outer(grads.weights[li], da, cache.inputs[li]);
    for (std::size_t i = 0; i < da.size(); ++i) grads.biases[li][i] += da[i];
    dz = matvec_t(m.weights[li], da);
  }
  return dz;
}

Encoder make_identity_encoder(std::size_t dim) {
  Encoder e;
  e.kind = Encoder::Kind::identity;
  e.in_dim = dim;
  e.out_dim = dim;
  return e;
}

Encoder make_mlp_encoder(std::span<const std::size_t> widths, Rng& rng) {
  Encoder e;
  e.kind = Encoder::Kind::mlp;
  e.mlp = make_mlp(widths, rng);
  e.in_dim = e.mlp.in_dim();
  e.out_dim = e.mlp.out_dim();
  return e;
}

Encoder zeros_like(const Encoder& e) {
  Encoder z = e;
  z.mlp = zeros_like(e.mlp);
  return z;
}

std::vector<ParamView> encoder_parameters(Encoder& e) {
  std::vector<ParamView> views;
  if (e.kind != Encoder::Kind::mlp) return views;
  for (std::size_t l = 0; l < e.mlp.weights.size(); ++l) {
    views.push_back({"enc.w" + std::to_string(l), e.mlp.weights[l].data.data(),
                     e.mlp.weights[l].data.size()});
    views.push_back({"enc.b" + std::to_string(l), e.mlp.biases[l].data(),
                     e.mlp.biases[l].size()});
  }
  return views;
}

Vector encode(const Encoder& enc, const Vector& x) {
  if (x.size() != enc.in_dim) throw std::invalid_argument("encode: input width mismatch");
  if (enc.kind == Encoder::Kind::identity) return x;
  return mlp_forward(enc.mlp, x);
}

Vector encode_backward(const Encoder& enc, const Vector& x, const Vector& upstream,
                       Encoder& grads) {
  if (enc.kind == Encoder::Kind::identity) return upstream;
  MlpCache cache;
  mlp_forward(enc.mlp, x, cache);
  return mlp_backward(enc.mlp, cache, upstream, grads.mlp);
}

PrototypeSet compute_prototypes(const Encoder& enc, const Episode& episode) {
  if (episode.way == 0 || episode.shot == 0)
    throw std::invalid_argument("compute_prototypes: malformed episode");
  PrototypeSet ps;
  ps.dim = enc.out_dim;
  ps.prototypes.assign(episode.way, Vector(enc.out_dim, 0.0));
  std::vector<std::size_t> counts(episode.way, 0);
  for (const auto& ex : episode.supports) {
    const Vector z = encode(enc, ex.feature);
    auto& proto = ps.prototypes[static_cast<std::size_t>(ex.class_id)];
    for (std::size_t d = 0; d < z.size(); ++d) proto[d] += z[d];
    ++counts[static_cast<std::size_t>(ex.class_id)];
  }
  for (std::size_t c = 0; c < episode.way; ++c) {
    if (counts[c] != episode.shot)
      throw std::invalid_argument("compute_prototypes: class " + std::to_string(c) +
                                  " has " + std::to_string(counts[c]) + " supports, expected " +
                                  std::to_string(episode.shot));
    for (double& v : ps.prototypes[c]) v /= static_cast<double>(episode.shot);
  }
  return ps;
}

ClassProbabilities classify(const Vector& query, const PrototypeSet& protos,
                            double temperature) {
  if (!(temperature > 0.0)) throw std::invalid_argument("classify: temperature must be > 0");
  if (protos.way() == 0) throw std::invalid_argument("classify: empty prototype set");
  Vector logits(protos.way());
  for (std::size_t c = 0; c < protos.way(); ++c)
    logits[c] = -euclidean_sq(query, protos.prototypes[c]) / temperature;
  return softmax(logits);
}

}  // namespace fsosr

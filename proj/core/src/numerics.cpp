#include "fsosr/numerics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fsosr {

Vector matvec(const Matrix& a, const Vector& x) {
  if (x.size() != a.cols) throw std::invalid_argument("matvec: dimension mismatch");
  Vector y(a.rows, 0.0);
  for (std::size_t r = 0; r < a.rows; ++r) {
    const double* row = a.data.data() + r * a.cols;
    double acc = 0.0;
    for (std::size_t c = 0; c < a.cols; ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
  return y;
}

Vector matvec_t(const Matrix& a, const Vector& x) {
  if (x.size() != a.rows) throw std::invalid_argument("matvec_t: dimension mismatch");
  Vector y(a.cols, 0.0);
  for (std::size_t r = 0; r < a.rows; ++r) {
    const double* row = a.data.data() + r * a.cols;
    const double xr = x[r];
    for (std::size_t c = 0; c < a.cols; ++c) y[c] += row[c] * xr;
  }
  return y;
}

void add_outer(Matrix& a, const Vector& u, const Vector& v) {
  if (u.size() != a.rows || v.size() != a.cols)
    throw std::invalid_argument("add_outer: dimension mismatch");
  for (std::size_t r = 0; r < a.rows; ++r) {
    double* row = a.data.data() + r * a.cols;
    const double ur = u[r];
    for (std::size_t c = 0; c < a.cols; ++c) row[c] += ur * v[c];
  }
}

bool all_finite(std::span<const double> values) {
  for (double v : values)
    if (!std::isfinite(v)) return false;
  return true;
}

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t Rng::next_u64() {
  state_ += 0x9E3779B97F4A7C15ull;
  return mix64(state_);
}

double Rng::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::next_normal() {
  double u1 = next_double();
  double u2 = next_double();
  while (u1 <= 0.0) u1 = next_double();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t Rng::next_index(std::size_t bound) {
  if (bound == 0) throw std::invalid_argument("next_index: bound must be nonzero");
  return static_cast<std::size_t>(
      (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) {
  return mix64(root ^ mix64(stream + 0xA0761D6478BD642Full));
}

double euclidean_sq(const Vector& a, const Vector& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("euclidean_sq: dimension mismatch (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  double acc = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double diff = a[d] - b[d];
    acc += diff * diff;
  }
  return acc;
}

Vector softmax(const Vector& logits) {
  if (logits.empty()) throw std::invalid_argument("softmax: empty input");
  const double shift = *std::max_element(logits.begin(), logits.end());
  Vector out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - shift);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

std::size_t argmax_with_ties(const Vector& values) {
  if (values.empty()) throw std::invalid_argument("argmax_with_ties: empty input");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return best;
}

double linear_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("linear_quantile: empty sample");
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("linear_quantile: q outside [0,1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace fsosr

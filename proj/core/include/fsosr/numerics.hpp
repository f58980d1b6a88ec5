#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fsosr {

/// Dense embedding vector. All entries are expected to stay finite; operations
/// that consume vectors validate dimensions and fail loudly on mismatch.
using Vector = std::vector<double>;

/// Row-major dense matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

/// y = A x
Vector matvec(const Matrix& a, const Vector& x);
/// y = A^T x
Vector matvec_t(const Matrix& a, const Vector& x);
/// A += u v^T
void add_outer(Matrix& a, const Vector& u, const Vector& v);

bool all_finite(std::span<const double> values);

/// Counter-based deterministic generator (splitmix64 core). Identical seed and
/// call sequence produce identical draws regardless of platform; substreams
/// are derived by hashing, never by sharing state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  /// Uniform in [0, 1), 53-bit resolution.
  double next_double();
  /// Standard normal via Box-Muller (consumes two uniforms per draw).
  double next_normal();
  /// Uniform integer in [0, bound). bound must be nonzero.
  std::size_t next_index(std::size_t bound);

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

/// Deterministic substream seed for (root, stream) pairs. Used to hand every
/// episode / purpose its own independent generator.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream);

/// Squared Euclidean distance. Throws std::invalid_argument on dimension
/// mismatch.
double euclidean_sq(const Vector& a, const Vector& b);

/// Max-shifted softmax. Throws std::invalid_argument on empty input.
Vector softmax(const Vector& logits);

/// Index of the maximum entry; exact ties resolve to the lowest index.
std::size_t argmax_with_ties(const Vector& values);

/// Linearly interpolated quantile of an unsorted sample, q in [0, 1]
/// (position 1 + q*(n-1) over the sorted values). Requires n >= 1.
double linear_quantile(std::vector<double> values, double q);

/// Shortest decimal form that round-trips to the same double. All text
/// artifacts (feature files, CSV reports, traces) are written through this so
/// identical runs produce identical bytes.
std::string format_double(double v);

}  // namespace fsosr

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fsosr/numerics.hpp"

namespace fsosr {

struct LabeledExample {
  Vector feature;
  std::int64_t class_id = 0;
};

/// One N-way K-shot open-set task. Support and known-query labels are remapped
/// to 0..N-1 in class-draw order; unknown-query labels to N..N+U-1, so the two
/// label sets are disjoint by construction. Original source class ids are kept
/// in original_class_ids (known classes first, then unknown classes).
struct Episode {
  std::vector<LabeledExample> supports;         // N*K, grouped by class
  std::vector<LabeledExample> known_queries;    // N*Q
  std::vector<LabeledExample> unknown_queries;  // U_classes * U_per_class
  std::size_t way = 0;                          // N
  std::size_t shot = 0;                         // K
  std::size_t queries_per_class = 0;            // Q
  std::size_t dim = 0;
  std::vector<std::int64_t> original_class_ids;
};

struct SyntheticSpec {
  std::uint64_t seed = 0;
  std::size_t classes = 0;
  std::size_t dim = 0;
  double mean_scale = 1.0;  // class means are uniform in [-mean_scale, mean_scale]^dim
  double within_std = 1.0;  // isotropic within-class standard deviation
  std::size_t per_class = 0;
};

/// A read-only pool of labeled feature vectors episodes are sampled from.
/// Synthetic pools are materialized once from their spec; file pools are
/// parsed from the text format below.
struct FeatureSource {
  enum class Kind { synthetic, file };
  Kind kind = Kind::synthetic;
  std::vector<LabeledExample> examples;
  std::size_t dim = 0;
  SyntheticSpec synthetic;  // kind == synthetic
  std::string path;         // kind == file
};

/// Draws one mean per class uniformly in [-mean_scale, mean_scale]^dim, then
/// per_class examples from an isotropic Gaussian around it. Deterministic
/// given the seed.
std::vector<LabeledExample> generate_synthetic_dataset(Rng& rng, std::size_t classes,
                                                       std::size_t dim, double mean_scale,
                                                       double within_std,
                                                       std::size_t per_class);

FeatureSource make_synthetic_source(const SyntheticSpec& spec);
FeatureSource make_file_source(const std::string& path);

/// Feature file format: first line `dim=<D>`, then one example per line as D
/// comma-separated decimal reals followed by one integer class label. LF line
/// terminators. Parse errors carry the 1-based offending line number.
std::vector<LabeledExample> load_feature_file(const std::string& path);
std::string serialize_feature_table(const std::vector<LabeledExample>& examples,
                                    std::size_t dim);
void save_feature_file(const std::string& path, const std::vector<LabeledExample>& examples,
                       std::size_t dim);

/// Samples an N-way K-shot open-set episode. Known classes (and, when
/// unknown_source is null, unknown classes) are drawn from `source` without
/// replacement; the unknown class set is always disjoint from the known one.
/// When unknown_source is given, unknown queries come from it instead
/// (cross-domain evaluation); its dimension must match.
Episode sample_episode(Rng& rng, const FeatureSource& source, std::size_t way,
                       std::size_t shot, std::size_t queries_per_class,
                       std::size_t unknown_classes, std::size_t unknown_per_class,
                       const FeatureSource* unknown_source = nullptr);

}  // namespace fsosr

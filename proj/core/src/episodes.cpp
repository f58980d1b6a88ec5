#include "fsosr/episodes.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace fsosr {

std::vector<LabeledExample> generate_synthetic_dataset(Rng& rng, std::size_t classes,
                                                       std::size_t dim, double mean_scale,
                                                       double within_std,
                                                       std::size_t per_class) {
  if (classes < 2) throw std::invalid_argument("generate_synthetic_dataset: classes must be >= 2");
  if (dim < 1) throw std::invalid_argument("generate_synthetic_dataset: dim must be >= 1");
  if (!(mean_scale > 0.0) || !(within_std > 0.0))
    throw std::invalid_argument("generate_synthetic_dataset: mean_scale and within_std must be > 0");
  if (per_class < 1) throw std::invalid_argument("generate_synthetic_dataset: per_class must be >= 1");

  std::vector<LabeledExample> out;
  out.reserve(classes * per_class);
  Vector mean(dim);
  for (std::size_t c = 0; c < classes; ++c) {
    for (std::size_t d = 0; d < dim; ++d)
      mean[d] = (2.0 * rng.next_double() - 1.0) * mean_scale;
    for (std::size_t i = 0; i < per_class; ++i) {
      LabeledExample ex;
      ex.class_id = static_cast<std::int64_t>(c);
      ex.feature.resize(dim);
      for (std::size_t d = 0; d < dim; ++d)
        ex.feature[d] = mean[d] + within_std * rng.next_normal();
      out.push_back(std::move(ex));
    }
  }
  return out;
}

FeatureSource make_synthetic_source(const SyntheticSpec& spec) {
  Rng rng(spec.seed);
  FeatureSource src;
  src.kind = FeatureSource::Kind::synthetic;
  src.synthetic = spec;
  src.dim = spec.dim;
  src.examples = generate_synthetic_dataset(rng, spec.classes, spec.dim, spec.mean_scale,
                                            spec.within_std, spec.per_class);
  return src;
}

FeatureSource make_file_source(const std::string& path) {
  FeatureSource src;
  src.kind = FeatureSource::Kind::file;
  src.path = path;
  src.examples = load_feature_file(path);
  src.dim = src.examples.empty() ? 0 : src.examples.front().feature.size();
  if (src.dim == 0) {
    // Recover D from the header so empty files still carry a dimension.
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    std::size_t d = 0;
    std::from_chars(header.data() + 4, header.data() + header.size(), d);
    src.dim = d;
  }
  return src;
}

namespace {

[[noreturn]] void parse_fail(const std::string& path, std::size_t line_no, const std::string& what) {
  throw std::invalid_argument("load_feature_file: " + path + ":" + std::to_string(line_no) +
                              ": " + what);
}

}  // namespace

std::vector<LabeledExample> load_feature_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("load_feature_file: cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();

  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= content.size()) {
    const std::size_t nl = content.find('\n', start);
    if (nl == std::string::npos) {
      lines.push_back(content.substr(start));
      break;
    }
    lines.push_back(content.substr(start, nl - start));
    start = nl + 1;
  }
  if (!lines.empty() && lines.back().empty()) lines.pop_back();

  if (lines.empty()) parse_fail(path, 1, "missing header line 'dim=<D>'");
  const std::string& header = lines.front();
  if (header.rfind("dim=", 0) != 0) parse_fail(path, 1, "expected header 'dim=<D>'");
  std::size_t dim = 0;
  {
    const char* b = header.data() + 4;
    const char* e = header.data() + header.size();
    const auto res = std::from_chars(b, e, dim);
    if (res.ec != std::errc{} || res.ptr != e || dim == 0)
      parse_fail(path, 1, "invalid dimension in header");
  }

  std::vector<LabeledExample> out;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::string& line = lines[li];
    const std::size_t line_no = li + 1;
    if (line.empty()) parse_fail(path, line_no, "empty line");

    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    const std::string_view sv(line);
    while (true) {
      const std::size_t comma = sv.find(',', pos);
      if (comma == std::string_view::npos) {
        fields.push_back(sv.substr(pos));
        break;
      }
      fields.push_back(sv.substr(pos, comma - pos));
      pos = comma + 1;
    }
    if (fields.size() != dim + 1)
      parse_fail(path, line_no,
                 "expected " + std::to_string(dim) + " values + 1 label, got " +
                     std::to_string(fields.size()) + " fields");

    LabeledExample ex;
    ex.feature.resize(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      const auto f = fields[d];
      const auto res = std::from_chars(f.data(), f.data() + f.size(), ex.feature[d]);
      if (res.ec != std::errc{} || res.ptr != f.data() + f.size())
        parse_fail(path, line_no, "non-numeric value in column " + std::to_string(d + 1));
      if (!std::isfinite(ex.feature[d]))
        parse_fail(path, line_no, "non-finite value in column " + std::to_string(d + 1));
    }
    {
      const auto f = fields[dim];
      const auto res = std::from_chars(f.data(), f.data() + f.size(), ex.class_id);
      if (res.ec != std::errc{} || res.ptr != f.data() + f.size())
        parse_fail(path, line_no, "invalid class label");
      if (ex.class_id < 0) parse_fail(path, line_no, "negative class label");
    }
    out.push_back(std::move(ex));
  }
  return out;
}

std::string serialize_feature_table(const std::vector<LabeledExample>& examples,
                                    std::size_t dim) {
  std::string out = "dim=" + std::to_string(dim) + "\n";
  for (const auto& ex : examples) {
    if (ex.feature.size() != dim)
      throw std::invalid_argument("serialize_feature_table: inconsistent dimension");
    for (double v : ex.feature) {
      out += format_double(v);
      out += ',';
    }
    out += std::to_string(ex.class_id);
    out += '\n';
  }
  return out;
}

void save_feature_file(const std::string& path, const std::vector<LabeledExample>& examples,
                       std::size_t dim) {
  std::ofstream of(path, std::ios::binary);
  if (!of) throw std::invalid_argument("save_feature_file: cannot open " + path + " for writing");
  of << serialize_feature_table(examples, dim);
  if (!of) throw std::runtime_error("save_feature_file: write failed for " + path);
}

namespace {

struct ClassGroup {
  std::int64_t class_id;
  std::vector<std::size_t> example_indices;  // into FeatureSource::examples
};

// Groups examples per class in first-appearance order, so sampling commutes
// with any relabeling of class ids.
std::vector<ClassGroup> group_by_class(const std::vector<LabeledExample>& examples) {
  std::vector<ClassGroup> groups;
  std::unordered_map<std::int64_t, std::size_t> index_of;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto id = examples[i].class_id;
    auto it = index_of.find(id);
    if (it == index_of.end()) {
      index_of.emplace(id, groups.size());
      groups.push_back({id, {i}});
    } else {
      groups[it->second].example_indices.push_back(i);
    }
  }
  return groups;
}

// Draws `count` distinct entries from `slots` by partial Fisher-Yates;
// returns them in draw order.
std::vector<std::size_t> draw_without_replacement(Rng& rng, std::vector<std::size_t> slots,
                                                  std::size_t count) {
  std::vector<std::size_t> picked;
  picked.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.next_index(slots.size() - i);
    std::swap(slots[i], slots[j]);
    picked.push_back(slots[i]);
  }
  return picked;
}

}  // namespace

Episode sample_episode(Rng& rng, const FeatureSource& source, std::size_t way,
                       std::size_t shot, std::size_t queries_per_class,
                       std::size_t unknown_classes, std::size_t unknown_per_class,
                       const FeatureSource* unknown_source) {
  if (way < 1 || shot < 1) throw std::invalid_argument("sample_episode: way and shot must be >= 1");
  if (unknown_classes > 0 && unknown_per_class < 1)
    throw std::invalid_argument("sample_episode: unknown_per_class must be >= 1");
  if (unknown_source && unknown_source->dim != source.dim)
    throw std::invalid_argument("sample_episode: source dimensions differ (" +
                                std::to_string(source.dim) + " vs " +
                                std::to_string(unknown_source->dim) + ")");

  const auto known_groups = group_by_class(source.examples);
  const std::size_t need_known = shot + queries_per_class;

  std::vector<std::size_t> eligible_known;
  for (std::size_t g = 0; g < known_groups.size(); ++g)
    if (known_groups[g].example_indices.size() >= need_known) eligible_known.push_back(g);
  if (eligible_known.size() < way)
    throw std::invalid_argument("sample_episode: requested " + std::to_string(way) +
                                " known classes but only " + std::to_string(eligible_known.size()) +
                                " classes have >= " + std::to_string(need_known) + " examples");

  const auto picked_known = draw_without_replacement(rng, eligible_known, way);

  Episode ep;
  ep.way = way;
  ep.shot = shot;
  ep.queries_per_class = queries_per_class;
  ep.dim = source.dim;

  for (std::size_t c = 0; c < way; ++c) {
    const ClassGroup& group = known_groups[picked_known[c]];
    ep.original_class_ids.push_back(group.class_id);
    const auto chosen = draw_without_replacement(rng, group.example_indices, need_known);
    for (std::size_t i = 0; i < shot; ++i)
      ep.supports.push_back({source.examples[chosen[i]].feature, static_cast<std::int64_t>(c)});
    for (std::size_t i = 0; i < queries_per_class; ++i)
      ep.known_queries.push_back(
          {source.examples[chosen[shot + i]].feature, static_cast<std::int64_t>(c)});
  }

  if (unknown_classes > 0) {
    const FeatureSource& usrc = unknown_source ? *unknown_source : source;
    const auto unknown_groups = unknown_source ? group_by_class(usrc.examples) : known_groups;

    std::vector<std::size_t> eligible_unknown;
    for (std::size_t g = 0; g < unknown_groups.size(); ++g) {
      if (unknown_groups[g].example_indices.size() < unknown_per_class) continue;
      if (!unknown_source) {
        bool is_known = false;
        for (std::size_t c = 0; c < way; ++c)
          if (picked_known[c] == g) is_known = true;
        if (is_known) continue;
      }
      eligible_unknown.push_back(g);
    }
    if (eligible_unknown.size() < unknown_classes)
      throw std::invalid_argument(
          "sample_episode: requested " + std::to_string(unknown_classes) +
          " unknown classes but only " + std::to_string(eligible_unknown.size()) +
          " remain with >= " + std::to_string(unknown_per_class) + " examples");

    const auto picked_unknown = draw_without_replacement(rng, eligible_unknown, unknown_classes);
    for (std::size_t u = 0; u < unknown_classes; ++u) {
      const ClassGroup& group = unknown_groups[picked_unknown[u]];
      ep.original_class_ids.push_back(group.class_id);
      const auto chosen = draw_without_replacement(rng, group.example_indices, unknown_per_class);
      for (std::size_t i = 0; i < unknown_per_class; ++i)
        ep.unknown_queries.push_back(
            {usrc.examples[chosen[i]].feature, static_cast<std::int64_t>(way + u)});
    }
  }
  return ep;
}

}  // namespace fsosr

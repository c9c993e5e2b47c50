#include "geometria/structcmp.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "geometria/errors.hpp"

namespace geometria::structcmp {

namespace {

constexpr double kDegenerateNorm = 1e-12;

void check_same_symbols(const Structure& a, const Structure& b) {
  if (a.symbol_ids != b.symbol_ids)
    fail(Errc::SymbolMismatch,
         "structures are over different symbol sets or orders");
}

// Center the point rows and scale to unit Frobenius norm.
Eigen::MatrixXd standardize(const Structure& s) {
  Eigen::MatrixXd m = s.matrix;
  m.rowwise() -= m.colwise().mean();
  const double norm = m.norm();
  if (norm < kDegenerateNorm)
    fail(Errc::DegenerateStructure,
         "centered structure has Frobenius norm below 1e-12");
  return m / norm;
}

std::vector<double> extract(const Structure& s, ExtractMode mode) {
  const auto n = s.matrix.rows();
  std::vector<double> out;
  if (mode == ExtractMode::UpperTriangle) {
    out.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) out.push_back(s.matrix(i, j));
  } else {
    out.reserve(static_cast<std::size_t>(n * (n - 1)));
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) out.push_back(s.matrix(i, j));
  }
  return out;
}

std::vector<double> average_ranks(const std::vector<double>& x) {
  const auto n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
    const double avg = 0.5 * (double(i) + double(j)) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double pearson_values(const std::vector<double>& x,
                      const std::vector<double>& y) {
  if (x.size() != y.size())
    fail(Errc::LengthMismatch, "correlation inputs differ in length");
  if (x.size() < 2)
    fail(Errc::EmptyPairSet, "correlation needs at least 2 values");
  const auto n = x.size();
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / double(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / double(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  double scale_x = 0.0, scale_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
    scale_x = std::max(scale_x, std::abs(x[i]));
    scale_y = std::max(scale_y, std::abs(y[i]));
  }
  // Constant vectors never separate from rounding noise cleanly; treat
  // anything at relative scale 1e-12 as zero variance.
  const double eps_x = 1e-12 * std::max(scale_x, 1.0);
  const double eps_y = 1e-12 * std::max(scale_y, 1.0);
  if (sxx <= double(n) * eps_x * eps_x || syy <= double(n) * eps_y * eps_y)
    fail(Errc::ZeroVariance, "constant entries make correlation undefined");
  return sxy / std::sqrt(sxx * syy);
}

double procrustes_disparity(const Structure& a, const Structure& b) {
  check_same_symbols(a, b);
  if (a.matrix.rows() != a.matrix.cols() || a.matrix.rows() < 2)
    fail(Errc::TooFewSymbols, "procrustes needs square structures, n >= 2");
  if (a.matrix.rows() != b.matrix.rows())
    fail(Errc::SymbolMismatch, "structures differ in size");

  const Eigen::MatrixXd pa = standardize(a);
  const Eigen::MatrixXd pb = standardize(b);
  const Eigen::MatrixXd cross = pa.transpose() * pb;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(cross);
  const double trace = svd.singularValues().sum();
  return std::clamp(1.0 - trace * trace, 0.0, 1.0);
}

double pearson_structures(const Structure& a, const Structure& b,
                          ExtractMode mode) {
  check_same_symbols(a, b);
  return pearson_values(extract(a, mode), extract(b, mode));
}

double spearman_structures(const Structure& a, const Structure& b,
                           ExtractMode mode) {
  check_same_symbols(a, b);
  return pearson_values(average_ranks(extract(a, mode)),
                        average_ranks(extract(b, mode)));
}

double StructuralMeasure::operator()(const Structure& a,
                                     const Structure& b) const {
  if (id == "procrustes-std") return procrustes_disparity(a, b);
  if (id == "pearson") return pearson_structures(a, b, mode);
  if (id == "spearman") return spearman_structures(a, b, mode);
  fail(Errc::UnknownMeasure, "no structural measure '" + id + "'");
}

StructuralMeasure structural_measure(const std::string& id, ExtractMode mode) {
  if (id == "procrustes-std" || id == "procrustes")
    return {"procrustes-std", relations::MeasureKind::Dissimilarity, mode};
  if (id == "pearson")
    return {"pearson", relations::MeasureKind::Similarity, mode};
  if (id == "spearman")
    return {"spearman", relations::MeasureKind::Similarity, mode};
  fail(Errc::UnknownMeasure, "no structural measure '" + id + "'");
}

namespace {

// Labels declare the varied decisions: "key=value" pairs, comma-separated.
std::vector<std::pair<std::string, std::string>> parse_label(
    const std::string& label) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::stringstream ss(label);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos || eq == 0)
      fail(Errc::LabelMismatch,
           "label '" + label + "' is not a key=value list");
    entries.emplace_back(part.substr(0, eq), part.substr(eq + 1));
  }
  if (entries.empty())
    fail(Errc::LabelMismatch, "empty label");
  return entries;
}

// "artifact.*" entries are digests of intermediate products, not decisions;
// they legitimately differ whenever a declared varied decision differs, so
// they are exempt from the strict backdrop check.
bool is_artifact_key(const std::string& key) {
  return key.rfind("artifact.", 0) == 0;
}

void enforce_shared_phi(const std::vector<LabeledStructure>& inputs,
                        const std::set<std::string>& varied_keys) {
  const Provenance& first = inputs.front().structure.provenance;
  for (std::size_t i = 1; i < inputs.size(); ++i) {
    const Provenance& other = inputs[i].structure.provenance;
    if (other.size() != first.size())
      fail(Errc::PhiMismatch,
           "structures record different decision sets");
    for (const auto& [key, value] : first.decisions()) {
      if (varied_keys.count(key) || is_artifact_key(key)) continue;
      const auto other_value = other.find(key);
      if (!other_value)
        fail(Errc::PhiMismatch, "decision '" + key + "' missing from input " +
                                    std::to_string(i));
      if (*other_value != value)
        fail(Errc::PhiMismatch,
             "decision '" + key + "' differs (" + value + " vs " +
                 *other_value + ") but is not declared varied");
    }
  }
}

// Shared Phi: every entry whose value agrees across all inputs and which is
// not declared varied. Artifact digests that differ simply drop out.
Provenance shared_phi_of(const std::vector<LabeledStructure>& inputs,
                         const std::set<std::string>& varied_keys) {
  Provenance shared;
  for (const auto& [key, value] : inputs.front().structure.provenance.decisions()) {
    if (varied_keys.count(key)) continue;
    bool agrees = true;
    for (std::size_t i = 1; i < inputs.size() && agrees; ++i) {
      const auto other = inputs[i].structure.provenance.find(key);
      agrees = other && *other == value;
    }
    if (agrees) shared.add(key, value);
  }
  return shared;
}

}  // namespace

MetaStructure meta_structure(const std::vector<LabeledStructure>& structures,
                             const StructuralMeasure& delta) {
  if (structures.size() < 2)
    fail(Errc::TooFewStructures, "meta_structure needs >= 2 structures");

  const auto first_entries = parse_label(structures.front().label);
  std::set<std::string> varied_keys;
  for (const auto& [k, v] : first_entries) varied_keys.insert(k);

  std::set<std::string> seen_labels;
  for (const auto& [label, structure] : structures) {
    const auto entries = parse_label(label);
    std::set<std::string> keys;
    for (const auto& [k, v] : entries) keys.insert(k);
    if (keys != varied_keys)
      fail(Errc::LabelMismatch,
           "label '" + label + "' varies a different decision set");
    if (!seen_labels.insert(label).second)
      fail(Errc::DuplicateDecision, "duplicate label '" + label + "'");
    if (structure.symbol_ids != structures.front().structure.symbol_ids)
      fail(Errc::SymbolMismatch,
           "structure '" + label + "' is over a different symbol set");
    // The label must describe the structure it is attached to.
    for (const auto& [k, v] : entries) {
      const auto recorded = structure.provenance.find(k);
      if (!recorded)
        fail(Errc::LabelMismatch,
             "label key '" + k + "' is not a recorded decision");
      if (*recorded != v)
        fail(Errc::LabelMismatch, "label '" + label +
                                      "' disagrees with recorded decision " +
                                      k + "=" + *recorded);
    }
  }
  enforce_shared_phi(structures, varied_keys);

  const auto g = static_cast<Eigen::Index>(structures.size());
  MetaStructure meta;
  meta.delta_id = delta.id;
  meta.matrix.resize(g, g);
  for (Eigen::Index i = 0; i < g; ++i) {
    meta.labels.push_back(structures[static_cast<std::size_t>(i)].label);
    meta.matrix(i, i) = delta.self_relation();
    for (Eigen::Index j = i + 1; j < g; ++j) {
      const double v = delta(structures[static_cast<std::size_t>(i)].structure,
                             structures[static_cast<std::size_t>(j)].structure);
      meta.matrix(i, j) = v;
      meta.matrix(j, i) = v;
    }
  }
  meta.shared_phi = shared_phi_of(structures, varied_keys);
  int max_level = 1;
  if (const auto lvl = structures.front().structure.provenance.find("meta.level"))
    max_level = std::stoi(*lvl);
  meta.level = max_level + 1;
  return meta;
}

void MetaStructure::summary(double& mean, double& stddev,
                            std::size_t& count) const {
  std::vector<double> values;
  const auto n = matrix.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) values.push_back(matrix(i, j));
  const GroupStats stats = stats_of(values);
  mean = stats.mean;
  stddev = stats.stddev;
  count = stats.count;
}

MetaStructure nested_semantics(const std::vector<LabeledMeta>& metas,
                               const StructuralMeasure& delta_prime,
                               int level_cap) {
  if (metas.size() < 2)
    fail(Errc::TooFewStructures, "nested_semantics needs >= 2 meta-structures");
  const auto& first = metas.front().meta;
  for (const auto& [label, meta] : metas) {
    if (meta.labels != first.labels)
      fail(Errc::LabelMismatch,
           "inner meta '" + label + "' has different inner labels");
    if (meta.delta_id != first.delta_id)
      fail(Errc::LabelMismatch,
           "inner meta '" + label + "' used a different delta");
    if (meta.level != first.level)
      fail(Errc::LabelMismatch,
           "inner meta '" + label + "' sits at a different level");
  }
  if (first.level + 1 > level_cap)
    fail(Errc::LevelOverflow,
         "nesting beyond level " + std::to_string(level_cap));

  // Each inner meta becomes a structure over its labels; the outer varied
  // decision is whatever Phi entries differ, exactly as one level down.
  std::vector<LabeledStructure> as_structures;
  as_structures.reserve(metas.size());
  for (const auto& [label, meta] : metas) {
    Structure s;
    s.matrix = meta.matrix;
    s.symbol_ids = meta.labels;
    s.measure_id = meta.delta_id;
    s.provenance = meta.shared_phi;
    s.provenance.add("meta.delta", meta.delta_id);
    s.provenance.add("meta.level", std::int64_t{meta.level});
    as_structures.push_back({label, std::move(s)});
  }
  MetaStructure outer = meta_structure(as_structures, delta_prime);
  outer.level = first.level + 1;
  return outer;
}

std::vector<double> pairwise_values(const std::vector<Structure>& group_a,
                                    const std::vector<Structure>& group_b,
                                    const StructuralMeasure& delta) {
  if (group_a.empty() || group_b.empty())
    fail(Errc::EmptyPairSet, "empty structure group");
  bool same_group = group_a.size() == group_b.size();
  if (same_group) {
    for (std::size_t i = 0; i < group_a.size(); ++i) {
      if (group_a[i].phi_digest() != group_b[i].phi_digest()) {
        same_group = false;
        break;
      }
    }
  }
  std::vector<double> values;
  if (same_group) {
    if (group_a.size() < 2)
      fail(Errc::EmptyPairSet,
           "a single structure has no distinct within-group pairs");
    for (std::size_t i = 0; i < group_a.size(); ++i)
      for (std::size_t j = i + 1; j < group_a.size(); ++j)
        values.push_back(delta(group_a[i], group_a[j]));
  } else {
    for (const auto& a : group_a)
      for (const auto& b : group_b) values.push_back(delta(a, b));
  }
  return values;
}

GroupStats stats_of(const std::vector<double>& values) {
  GroupStats stats;
  stats.count = values.size();
  if (values.empty()) return stats;
  stats.mean = std::accumulate(values.begin(), values.end(), 0.0) /
               double(values.size());
  double ss = 0.0;
  for (const double v : values) ss += (v - stats.mean) * (v - stats.mean);
  stats.stddev = std::sqrt(ss / double(values.size()));
  return stats;
}

GroupStats group_mean_distance(const std::vector<Structure>& group_a,
                               const std::vector<Structure>& group_b,
                               const StructuralMeasure& delta) {
  return stats_of(pairwise_values(group_a, group_b, delta));
}

CodeEquivalence code_equivalence(const Structure& transfer,
                                 const Structure& native,
                                 const StructuralMeasure& delta, double tol) {
  check_same_symbols(transfer, native);
  // Only the training-corpus artifact may differ between the two pipelines;
  // the target matrix, symbols and every decision key must agree.
  const auto& pa = transfer.provenance;
  const auto& pb = native.provenance;
  if (!pa.empty() && !pb.empty()) {
    if (pa.size() != pb.size())
      fail(Errc::PhiMismatch, "pipelines record different decision sets");
    for (const auto& [key, value] : pa.decisions()) {
      if (key == "artifact.train_dtm") continue;
      const auto other = pb.find(key);
      if (!other || *other != value)
        fail(Errc::PhiMismatch,
             "decision '" + key + "' differs beyond the training corpus");
    }
  }
  CodeEquivalence result;
  result.value = delta(transfer, native);
  result.equivalent = result.value <= tol;
  return result;
}

void save_meta(const MetaStructure& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::IoError, "cannot write '" + path + "'");
  const auto n = m.matrix.rows();
  out << "META1 " << n << ' ' << m.delta_id << ' ' << m.level << ' '
      << m.phi_digest() << '\n';
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j) out << ' ';
      out << format_full(m.matrix(i, j));
    }
    out << '\n';
  }
  for (const auto& label : m.labels) out << label << '\n';
  if (!out) fail(Errc::IoError, "short write to '" + path + "'");

  std::ofstream prov(path + ".prov", std::ios::binary);
  if (!prov) fail(Errc::IoError, "cannot write '" + path + ".prov'");
  prov << m.shared_phi.canonical_text();
}

MetaStructure load_meta(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::UnreadablePath, "cannot open '" + path + "'");
  std::string magic, delta_id, digest;
  Eigen::Index n = 0;
  int level = 0;
  if (!(in >> magic >> n >> delta_id >> level >> digest) || magic != "META1")
    fail(Errc::MalformedRecord, path + ": bad META1 header");
  MetaStructure m;
  m.delta_id = delta_id;
  m.level = level;
  m.matrix.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (!(in >> m.matrix(i, j)))
        fail(Errc::MalformedRecord, path + ": truncated matrix");
  std::string line;
  std::getline(in, line);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::getline(in, line))
      fail(Errc::MalformedRecord, path + ": missing labels");
    m.labels.push_back(line);
  }
  std::ifstream prov(path + ".prov");
  if (prov) {
    while (std::getline(prov, line)) {
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        fail(Errc::StoreCorruption, path + ".prov: bad line '" + line + "'");
      m.shared_phi.add(line.substr(0, eq), line.substr(eq + 1));
    }
    if (m.shared_phi.digest() != digest)
      fail(Errc::StoreCorruption,
           path + ": provenance digest does not match header");
  }
  return m;
}

}  // namespace geometria::structcmp

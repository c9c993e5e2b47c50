#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "geometria/provenance.hpp"
#include "geometria/relations.hpp"

namespace geometria::structcmp {

using relations::Structure;

enum class ExtractMode { UpperTriangle, FullOffdiag };

// A structural relation measure delta: how two geometries relate.
// "procrustes-std" is a dissimilarity; "pearson" and "spearman" are
// similarities over extracted entries.
struct StructuralMeasure {
  std::string id;
  relations::MeasureKind kind;
  ExtractMode mode = ExtractMode::UpperTriangle;

  double operator()(const Structure& a, const Structure& b) const;
  double self_relation() const {
    return kind == relations::MeasureKind::Dissimilarity ? 0.0 : 1.0;
  }
};

StructuralMeasure structural_measure(
    const std::string& id, ExtractMode mode = ExtractMode::UpperTriangle);

// Standardized Procrustes disparity in [0, 1]. Each matrix's rows are
// treated as n points in n-dimensional space; both configurations are
// centered and scaled to unit Frobenius norm, then optimally aligned by an
// orthogonal map (reflections allowed) found through the SVD of the
// cross-covariance. Disparity = 1 - (sum of singular values)^2.
double procrustes_disparity(const Structure& a, const Structure& b);

// Pearson correlation between the entries extracted from both structures.
// Throws ZeroVariance when either side is constant (e.g. a null structure).
double pearson_structures(const Structure& a, const Structure& b,
                          ExtractMode mode = ExtractMode::UpperTriangle);

// Spearman rank correlation over the same extraction; ties get average ranks.
double spearman_structures(const Structure& a, const Structure& b,
                           ExtractMode mode = ExtractMode::UpperTriangle);

// Pearson over plain value vectors (ZeroVariance on constant input); the
// primitive behind both correlation measures and the outer delta-agreement.
double pearson_values(const std::vector<double>& x,
                      const std::vector<double>& y);

// A geometry whose points are themselves geometries: the semantics of the
// varied decision Sigma against the shared backdrop Phi.
struct MetaStructure {
  Eigen::MatrixXd matrix;  // |Sigma| x |Sigma|
  std::vector<std::string> labels;
  Provenance shared_phi;
  std::string delta_id;
  int level = 2;

  std::string phi_digest() const { return shared_phi.digest(); }

  // Mean/std/count over the off-diagonal upper triangle (self-relations on
  // the diagonal are never summarized).
  void summary(double& mean, double& stddev, std::size_t& count) const;
};

// One input to a meta-level comparison. The label declares the varied
// decision(s) as comma-separated provenance entries, e.g. "lda.seed=42" or
// "lda.k=100,lda.seed=7"; every other decision must agree across inputs.
struct LabeledStructure {
  std::string label;
  Structure structure;
};

inline constexpr int kDefaultLevelCap = 5;

// Builds the |Sigma| x |Sigma| matrix of delta over all pairs. Enforces the
// fixed-backdrop contract: identical symbol ids, identical varied-key sets
// across labels, and identical values for every decision not declared
// varied (PhiMismatch otherwise).
MetaStructure meta_structure(const std::vector<LabeledStructure>& structures,
                             const StructuralMeasure& delta);

struct LabeledMeta {
  std::string label;
  MetaStructure meta;
};

// Applies the meta machinery one level up: each inner meta-structure's
// matrix is treated exactly as a structure over its labels. All inner metas
// must share labels and delta_id.
MetaStructure nested_semantics(const std::vector<LabeledMeta>& metas,
                               const StructuralMeasure& delta_prime,
                               int level_cap = kDefaultLevelCap);

struct GroupStats {
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t count = 0;
};

// All delta values between two groups: every ordered cross pair when the
// groups differ, every unordered distinct pair when they are the same group
// (detected by elementwise phi digests).
std::vector<double> pairwise_values(const std::vector<Structure>& group_a,
                                    const std::vector<Structure>& group_b,
                                    const StructuralMeasure& delta);

GroupStats group_mean_distance(const std::vector<Structure>& group_a,
                               const std::vector<Structure>& group_b,
                               const StructuralMeasure& delta);

GroupStats stats_of(const std::vector<double>& values);

struct CodeEquivalence {
  double value = 0.0;
  bool equivalent = false;
};

// Compares the structure of S under a transferred code (model trained on
// one corpus, applied to another) with the natively trained structure.
// The inputs must agree on every decision except the training corpus.
CodeEquivalence code_equivalence(const Structure& transfer,
                                 const Structure& native,
                                 const StructuralMeasure& delta, double tol);

// META1 persistence mirroring STRUCT1, plus a ".prov" sidecar for Phi.
void save_meta(const MetaStructure& m, const std::string& path);
MetaStructure load_meta(const std::string& path);

}  // namespace geometria::structcmp

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "geometria/provenance.hpp"

namespace geometria::relations {

// A matrix assigning each symbol a numeric vector, with the decision chain
// that produced it.
struct Representation {
  Eigen::MatrixXd rows;  // |S| x dim
  std::vector<std::string> symbol_ids;
  Provenance provenance;

  void validate() const;
};

enum class MeasureKind { Dissimilarity, Similarity };
enum class MeasureDomain { ProbabilityVectors, RealVectors, Strings };

// A pairwise relation measure d together with its declared contract; the
// declarations (symmetry, bounds, domain) are enforced by property tests.
struct RelationMeasure {
  std::string id;
  MeasureKind kind = MeasureKind::Dissimilarity;
  bool symmetric = true;
  MeasureDomain domain = MeasureDomain::RealVectors;
  std::optional<std::pair<double, double>> bounds;
  std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)> fn;
};

// Registered vector measures: "jsd2", "cosine", "hellinger", "euclidean".
const RelationMeasure& measure_by_id(const std::string& id);
std::vector<std::string> measure_ids();

// The pairwise relation matrix over a symbol set: one geometry, one element
// of the structural space. Immutable once built.
struct Structure {
  Eigen::MatrixXd matrix;  // |S| x |S|
  std::vector<std::string> symbol_ids;
  std::string measure_id;
  Provenance provenance;

  std::string phi_digest() const { return provenance.digest(); }
  std::size_t size() const { return symbol_ids.size(); }

  void validate() const;
};

// Jensen-Shannon divergence, base-2 logarithm, so the range is [0, 1].
// Zero-probability terms contribute nothing.
double jsd(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

// 1 - cos(u, v). Throws ZeroVector for a zero-norm input.
double cosine_distance(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

// Hellinger distance over probability vectors, bounded [0, 1].
double hellinger(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

double euclidean(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

// Levenshtein distance with unit insert/delete/substitute costs.
std::uint64_t edit_distance(const std::string& a, const std::string& b);

// Applies d over all ordered pairs of representation rows (the full matrix,
// including both triangles); diagonal = the measure's self-relation.
// Chains the representation's provenance with the measure id.
Structure structural_map(const Representation& rep, const RelationMeasure& d);
Structure structural_map(const Representation& rep, const std::string& measure_id);

// Structure over raw texts using edit distance; measure_id "edit".
Structure edit_structure(const std::vector<std::string>& ids,
                         const std::vector<std::string>& texts);

enum class RandomKind { Symmetric, Full };

// Reference structure with i.i.d. Uniform[0,1] entries, zero diagonal.
// `Symmetric` draws the strict upper triangle row-major and mirrors it;
// `Full` draws every off-diagonal entry row-major.
Structure random_structure(const std::vector<std::string>& symbol_ids,
                           RandomKind kind, std::uint64_t seed);

// Reference structure with every off-diagonal entry equal to c > 0. All
// null structures are one equivalence class under Procrustes scaling.
Structure null_structure(const std::vector<std::string>& symbol_ids, double c);

// STRUCT1 persistence: header "STRUCT1 n measure_id phi_digest", n rows of
// n values at 17 significant digits, then n symbol ids. A ".prov" sidecar
// carries the decision chain.
void save_structure(const Structure& s, const std::string& path);
Structure load_structure(const std::string& path);

}  // namespace geometria::relations

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geometria/corpus.hpp"
#include "geometria/lda.hpp"
#include "geometria/relations.hpp"
#include "geometria/store.hpp"
#include "geometria/structcmp.hpp"

namespace geometria::experiments {

using corpus::DocTermMatrix;
using corpus::SymbolSet;
using relations::Structure;
using structcmp::GroupStats;
using structcmp::StructuralMeasure;

// The model ensemble Theta = { theta_{k,psi} : k in K, psi in Psi }.
struct EnsembleSpec {
  std::vector<int> topic_counts;       // K
  std::vector<std::uint64_t> seeds;    // Psi, shared across every k
  lda::LdaConfig lda_template;         // k/seed overwritten per member;
                                       // alpha <= 0 selects 1/k
  int fold_iters = 200;
  std::string measure_d = "jsd2";

  void validate() const;

  // Draws `count` distinct seeds from a master seed.
  static std::vector<std::uint64_t> draw_seeds(std::uint64_t master,
                                               std::size_t count);

  lda::LdaConfig member_config(int k, std::uint64_t seed) const;
};

struct EnsembleEntry {
  int k = 0;
  std::uint64_t seed = 0;
  std::string label;  // "lda.k=...,lda.seed=..."
  Structure structure;
  bool from_cache = false;
};

struct EnsembleBuildLog {
  std::size_t trained_models = 0;
  std::size_t cached_models = 0;
  std::size_t built_structures = 0;
  std::size_t cached_structures = 0;
};

// The decision chain a member structure will carry, computable without
// training; build_ensemble uses it to skip cached work.
Provenance member_provenance(const Provenance& base, const DocTermMatrix& dtm,
                             const SymbolSet& symbols,
                             const lda::LdaConfig& cfg, int fold_iters,
                             const std::string& measure_id);

// Trains (or loads) every theta_{k,psi}, represents the symbols via fold-in,
// applies the structural map with d, and persists every structure.
std::vector<EnsembleEntry> build_ensemble(const DocTermMatrix& dtm,
                                          const SymbolSet& symbols,
                                          const EnsembleSpec& spec,
                                          store::StructureStore& store,
                                          const Provenance& base = {},
                                          EnsembleBuildLog* log = nullptr);

// Random-baseline structures over the same symbols; seeds derive from the
// context digest so reports are recomputable run over run.
std::vector<Structure> random_baselines(const std::vector<std::string>& ids,
                                        std::size_t count,
                                        const std::string& context_digest);

struct StabilityRow {
  int k = 0;
  GroupStats lda_lda;        // f(Psi_k | Phi, delta)
  GroupStats lda_random;
  GroupStats lda_null;
  std::vector<double> within_values;  // the g(g-1)/2 pair values
};

struct StabilityReport {
  StabilityRow row;
  std::string delta_id;
  std::size_t n_random = 0;
  double null_c = 1.0;
};

// Within-k pair distances plus the random/null reference comparisons: one
// row of the stability table and the distribution behind its boxplot.
StabilityReport stability_analysis(const std::vector<EnsembleEntry>& ensemble,
                                   int k, std::size_t n_random,
                                   const StructuralMeasure& delta,
                                   double null_c = 1.0);

std::vector<StabilityRow> stability_table(
    const std::vector<EnsembleEntry>& ensemble, std::size_t n_random,
    const StructuralMeasure& delta, double null_c = 1.0);

struct KSweepReport {
  std::vector<int> topic_counts;
  Eigen::MatrixXd mean_matrix;   // within-group means on the diagonal
  Eigen::MatrixXd count_matrix;  // pair counts behind each mean
  std::string delta_id;
};

// The |K| x |K| grid of group mean distances between dimensionality groups.
KSweepReport k_sweep(const std::vector<EnsembleEntry>& ensemble,
                     const StructuralMeasure& delta);

struct AgreementPair {
  std::string label_a;
  std::string label_b;
  double value_a = 0.0;
  double value_b = 0.0;
};

struct AgreementReport {
  std::vector<AgreementPair> pairs;  // g(g-1)/2 rows
  double outer_correlation = 0.0;    // Pearson between the two value lists
  std::string delta_a_id;
  std::string delta_b_id;
};

// Both deltas over every unordered ensemble pair, then the correlation
// between the value lists (itself a structural relation, one level up).
AgreementReport delta_agreement(const std::vector<EnsembleEntry>& ensemble,
                                const StructuralMeasure& delta_a,
                                const StructuralMeasure& delta_b);

// Pearson over plain value vectors; exposed for the outer correlation and
// for report recomputation tests.
double pearson_correlation(const std::vector<double>& x,
                           const std::vector<double>& y);

// CSV renderings of the reports (column contracts in docs/formats.md).
std::string stability_csv(const StabilityReport& report,
                          const std::vector<EnsembleEntry>& ensemble);
std::string stability_table_csv(const std::vector<StabilityRow>& rows);
std::string ksweep_csv(const KSweepReport& report);
std::string agreement_csv(const AgreementReport& report);

}  // namespace geometria::experiments

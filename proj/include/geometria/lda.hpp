#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "geometria/corpus.hpp"
#include "geometria/relations.hpp"
#include "geometria/rng.hpp"

namespace geometria::lda {

using corpus::DocTermMatrix;
using corpus::SymbolSet;

struct LdaConfig {
  int k = 10;
  double alpha = 0.1;   // doc-topic Dirichlet
  double beta = 0.01;   // topic-word Dirichlet
  int iterations = 1000;
  int burn_in = 500;
  int sample_lag = 50;
  std::uint64_t seed = 1;  // the psi decision

  // Common-practice defaults: alpha = 1/k, beta = 0.01.
  static LdaConfig defaults(int k, std::uint64_t seed);

  void validate() const;
  void stamp(Provenance& p) const;  // records lda.* decisions
};

struct TopicModel {
  LdaConfig cfg;
  Eigen::MatrixXd topic_word;  // k x n, rows strictly positive, sum to 1
  std::vector<std::string> vocab;
  std::string training_hash;     // digest of (training dtm, cfg)
  std::string train_dtm_digest;  // digest of the training matrix alone

  void validate() const;
};

struct DocTopicMatrix {
  Eigen::MatrixXd rows;  // |S| x k, each row a probability distribution
  std::vector<std::string> symbol_ids;
  std::string source_model;
};

std::string training_hash(const DocTermMatrix& dtm, const LdaConfig& cfg);

// Collapsed Gibbs sampler over token-topic assignments. Exposed so tests
// can step the chain and watch the count invariants; train_lda drives it.
class GibbsSampler {
 public:
  GibbsSampler(const DocTermMatrix& dtm, const LdaConfig& cfg);

  // One full sweep over all tokens.
  void step();

  // Records the current counts into the posterior-mean accumulators.
  void snapshot();

  // Runs the configured schedule: iterations sweeps, snapshots every
  // sample_lag after burn_in.
  void run();

  TopicModel model() const;           // mean of smoothed snapshots
  Eigen::MatrixXd doc_topic() const;  // training-time doc-topic means, m x k

  // Count accessors for invariant checks.
  std::uint64_t doc_token_count(std::size_t d) const;
  std::uint64_t doc_topic_total(std::size_t d) const;
  std::uint64_t assignment_total() const;
  std::uint64_t token_count() const { return words_.size(); }
  int snapshots() const { return snapshots_; }

 private:
  void sample_token(std::size_t i);

  LdaConfig cfg_;
  std::size_t n_vocab_;
  std::vector<std::string> vocab_;
  std::string training_hash_;
  std::string train_dtm_digest_;

  std::vector<std::uint32_t> words_;       // flattened token stream
  std::vector<std::uint32_t> token_doc_;   // owning document per token
  std::vector<std::int32_t> z_;            // current assignments
  std::vector<std::int32_t> n_dk_, n_wk_, n_k_;
  std::vector<double> inv_nk_;             // 1 / (n_k + n*beta), kept in step
  std::vector<double> weights_;
  Eigen::MatrixXd phi_acc_, theta_acc_;
  int snapshots_ = 0;
  std::size_t m_docs_;
  Rng rng_;
};

TopicModel train_lda(const DocTermMatrix& dtm, const LdaConfig& cfg);

struct FoldInReport {
  std::uint64_t kept_tokens = 0;
  std::uint64_t dropped_tokens = 0;  // out-of-vocabulary at fold-in
};

// Fold-in: holds topic_word fixed and Gibbs-samples assignments for the
// requested documents only. Each document runs an independent seeded chain,
// so rows depend only on the document, never on the symbol order.
DocTopicMatrix infer_doc_topics(const TopicModel& model,
                                const DocTermMatrix& dtm,
                                const SymbolSet& symbols, int fold_iters,
                                FoldInReport* report = nullptr);

// Wraps infer_doc_topics into the generic Representation, chaining the
// upstream decisions with the model and fold-in decisions.
relations::Representation represent_symbols(const TopicModel& model,
                                            const DocTermMatrix& dtm,
                                            const SymbolSet& symbols,
                                            int fold_iters,
                                            const Provenance& base = {});

// LDAM1 model file: header, hyperparameters, vocab, topic_word rows.
void save_model(const TopicModel& model, const std::string& path);
TopicModel load_model(const std::string& path);

}  // namespace geometria::lda

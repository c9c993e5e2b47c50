#include "geometria/lda.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <unordered_map>

#include "geometria/errors.hpp"
#include "geometria/sha256.hpp"

namespace geometria::lda {

LdaConfig LdaConfig::defaults(int k, std::uint64_t seed) {
  LdaConfig cfg;
  cfg.k = k;
  cfg.alpha = 1.0 / double(k);
  cfg.seed = seed;
  return cfg;
}

void LdaConfig::validate() const {
  if (k < 1) fail(Errc::InvalidConfig, "k must be >= 1");
  if (!(alpha > 0.0)) fail(Errc::InvalidConfig, "alpha must be > 0");
  if (!(beta > 0.0)) fail(Errc::InvalidConfig, "beta must be > 0");
  if (iterations < 1) fail(Errc::InvalidConfig, "iterations must be >= 1");
  if (burn_in < 0 || burn_in >= iterations)
    fail(Errc::InvalidConfig, "burn_in must lie in [0, iterations)");
  if (sample_lag < 1) fail(Errc::InvalidConfig, "sample_lag must be >= 1");
  if (burn_in + sample_lag > iterations)
    fail(Errc::InvalidConfig,
         "schedule takes no snapshots (burn_in + sample_lag > iterations)");
}

void LdaConfig::stamp(Provenance& p) const {
  p.add("lda.k", std::int64_t{k});
  p.add("lda.alpha", alpha);
  p.add("lda.beta", beta);
  p.add("lda.iterations", std::int64_t{iterations});
  p.add("lda.burn_in", std::int64_t{burn_in});
  p.add("lda.sample_lag", std::int64_t{sample_lag});
  p.add("lda.seed", std::int64_t(static_cast<std::int64_t>(seed)));
}

std::string training_hash(const DocTermMatrix& dtm, const LdaConfig& cfg) {
  Provenance p;
  p.add("artifact.train_dtm", dtm.digest());
  cfg.stamp(p);
  return p.digest();
}

void TopicModel::validate() const {
  if (topic_word.rows() != cfg.k ||
      topic_word.cols() != static_cast<Eigen::Index>(vocab.size()))
    fail(Errc::InvalidParameter, "topic_word shape mismatch");
  for (Eigen::Index t = 0; t < topic_word.rows(); ++t) {
    if ((topic_word.row(t).array() <= 0.0).any())
      fail(Errc::InvalidDistribution,
           "topic " + std::to_string(t) + " has a non-positive entry");
    const double sum = topic_word.row(t).sum();
    if (std::abs(sum - 1.0) > 1e-9)
      fail(Errc::InvalidDistribution,
           "topic " + std::to_string(t) + " sums to " + format_full(sum));
  }
}

GibbsSampler::GibbsSampler(const DocTermMatrix& dtm, const LdaConfig& cfg)
    : cfg_(cfg),
      n_vocab_(dtm.n),
      vocab_(dtm.vocab),
      training_hash_(lda::training_hash(dtm, cfg)),
      train_dtm_digest_(dtm.digest()),
      m_docs_(dtm.m),
      rng_(cfg.seed) {
  cfg_.validate();
  if (dtm.m == 0 || dtm.n == 0) fail(Errc::InvalidParameter, "empty matrix");

  // Flatten counts into a token stream: documents in order, terms in
  // ascending index, `count` repeats each. This order is part of the
  // determinism contract.
  for (std::size_t d = 0; d < dtm.rows.size(); ++d) {
    for (const auto& [term, count] : dtm.rows[d]) {
      for (std::uint32_t c = 0; c < count; ++c) {
        words_.push_back(term);
        token_doc_.push_back(static_cast<std::uint32_t>(d));
      }
    }
  }
  if (words_.empty())
    fail(Errc::InvalidParameter, "matrix contains no tokens");
  if (static_cast<std::uint64_t>(cfg_.k) > words_.size())
    std::cerr << "geometria: warning: k = " << cfg_.k << " exceeds the "
              << words_.size() << " training tokens\n";

  const auto k = static_cast<std::size_t>(cfg_.k);
  n_dk_.assign(m_docs_ * k, 0);
  n_wk_.assign(n_vocab_ * k, 0);
  n_k_.assign(k, 0);
  z_.resize(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    const auto t = static_cast<std::int32_t>(uniform_below(rng_, k));
    z_[i] = t;
    ++n_dk_[token_doc_[i] * k + static_cast<std::size_t>(t)];
    ++n_wk_[words_[i] * k + static_cast<std::size_t>(t)];
    ++n_k_[static_cast<std::size_t>(t)];
  }
  const double vbeta = double(n_vocab_) * cfg_.beta;
  inv_nk_.resize(k);
  for (std::size_t t = 0; t < k; ++t)
    inv_nk_[t] = 1.0 / (double(n_k_[t]) + vbeta);
  weights_.resize(k);
  phi_acc_.setZero(cfg_.k, static_cast<Eigen::Index>(n_vocab_));
  theta_acc_.setZero(static_cast<Eigen::Index>(m_docs_), cfg_.k);
}

void GibbsSampler::sample_token(std::size_t i) {
  const auto k = static_cast<std::size_t>(cfg_.k);
  const double vbeta = double(n_vocab_) * cfg_.beta;
  const std::size_t d = token_doc_[i];
  const std::size_t w = words_[i];
  const auto old_t = static_cast<std::size_t>(z_[i]);

  --n_dk_[d * k + old_t];
  --n_wk_[w * k + old_t];
  --n_k_[old_t];
  inv_nk_[old_t] = 1.0 / (double(n_k_[old_t]) + vbeta);

  const std::int32_t* dk = &n_dk_[d * k];
  const std::int32_t* wk = &n_wk_[w * k];
  double total = 0.0;
  for (std::size_t t = 0; t < k; ++t) {
    const double wgt = (double(dk[t]) + cfg_.alpha) *
                       (double(wk[t]) + cfg_.beta) * inv_nk_[t];
    weights_[t] = wgt;
    total += wgt;
  }
  const std::size_t new_t =
      categorical_from_cumulative(rng_, weights_.data(), k, total);

  z_[i] = static_cast<std::int32_t>(new_t);
  ++n_dk_[d * k + new_t];
  ++n_wk_[w * k + new_t];
  ++n_k_[new_t];
  inv_nk_[new_t] = 1.0 / (double(n_k_[new_t]) + vbeta);
}

void GibbsSampler::step() {
  for (std::size_t i = 0; i < words_.size(); ++i) sample_token(i);
}

void GibbsSampler::snapshot() {
  const auto k = static_cast<std::size_t>(cfg_.k);
  const double vbeta = double(n_vocab_) * cfg_.beta;
  for (std::size_t t = 0; t < k; ++t) {
    const double denom = double(n_k_[t]) + vbeta;
    for (std::size_t w = 0; w < n_vocab_; ++w)
      phi_acc_(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(w)) +=
          (double(n_wk_[w * k + t]) + cfg_.beta) / denom;
  }
  for (std::size_t d = 0; d < m_docs_; ++d) {
    const double len = double(doc_topic_total(d));
    const double denom = len + double(cfg_.k) * cfg_.alpha;
    for (std::size_t t = 0; t < k; ++t)
      theta_acc_(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(t)) +=
          (double(n_dk_[d * k + t]) + cfg_.alpha) / denom;
  }
  ++snapshots_;
}

void GibbsSampler::run() {
  for (int it = 1; it <= cfg_.iterations; ++it) {
    step();
    if (it > cfg_.burn_in && (it - cfg_.burn_in) % cfg_.sample_lag == 0)
      snapshot();
  }
}

TopicModel GibbsSampler::model() const {
  if (snapshots_ == 0)
    fail(Errc::InvalidConfig, "no snapshots accumulated");
  TopicModel out;
  out.cfg = cfg_;
  out.vocab = vocab_;
  out.training_hash = training_hash_;
  out.train_dtm_digest = train_dtm_digest_;
  out.topic_word = phi_acc_ / double(snapshots_);
  out.validate();
  return out;
}

Eigen::MatrixXd GibbsSampler::doc_topic() const {
  if (snapshots_ == 0)
    fail(Errc::InvalidConfig, "no snapshots accumulated");
  return theta_acc_ / double(snapshots_);
}

std::uint64_t GibbsSampler::doc_token_count(std::size_t d) const {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < token_doc_.size(); ++i)
    if (token_doc_[i] == d) ++total;
  return total;
}

std::uint64_t GibbsSampler::doc_topic_total(std::size_t d) const {
  const auto k = static_cast<std::size_t>(cfg_.k);
  std::uint64_t total = 0;
  for (std::size_t t = 0; t < k; ++t)
    total += static_cast<std::uint64_t>(n_dk_[d * k + t]);
  return total;
}

std::uint64_t GibbsSampler::assignment_total() const {
  std::uint64_t total = 0;
  for (const auto c : n_k_) total += static_cast<std::uint64_t>(c);
  return total;
}

TopicModel train_lda(const DocTermMatrix& dtm, const LdaConfig& cfg) {
  GibbsSampler sampler(dtm, cfg);
  sampler.run();
  return sampler.model();
}

namespace {

// Independent fold-in chain for one document against fixed topic_word.
Eigen::VectorXd fold_in_document(const TopicModel& model,
                                 const std::vector<std::uint32_t>& tokens,
                                 int fold_iters, std::uint64_t seed) {
  const auto k = static_cast<std::size_t>(model.cfg.k);
  const double alpha = model.cfg.alpha;
  Rng rng(seed);

  std::vector<std::int32_t> z(tokens.size());
  std::vector<std::int32_t> n_t(k, 0);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto t = static_cast<std::int32_t>(uniform_below(rng, k));
    z[i] = t;
    ++n_t[static_cast<std::size_t>(t)];
  }

  Eigen::VectorXd acc = Eigen::VectorXd::Zero(model.cfg.k);
  std::vector<double> weights(k);
  const int burn = fold_iters / 2;
  const double denom = double(tokens.size()) + double(k) * alpha;
  int samples = 0;
  for (int it = 1; it <= fold_iters; ++it) {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const auto old_t = static_cast<std::size_t>(z[i]);
      --n_t[old_t];
      double total = 0.0;
      for (std::size_t t = 0; t < k; ++t) {
        const double wgt =
            (double(n_t[t]) + alpha) *
            model.topic_word(static_cast<Eigen::Index>(t), tokens[i]);
        weights[t] = wgt;
        total += wgt;
      }
      const std::size_t new_t =
          categorical_from_cumulative(rng, weights.data(), k, total);
      z[i] = static_cast<std::int32_t>(new_t);
      ++n_t[new_t];
    }
    if (it > burn) {
      for (std::size_t t = 0; t < k; ++t)
        acc[static_cast<Eigen::Index>(t)] += (double(n_t[t]) + alpha) / denom;
      ++samples;
    }
  }
  return acc / double(samples);
}

}  // namespace

DocTopicMatrix infer_doc_topics(const TopicModel& model,
                                const DocTermMatrix& dtm,
                                const SymbolSet& symbols, int fold_iters,
                                FoldInReport* report) {
  model.validate();
  symbols.validate();
  if (fold_iters < 1) fail(Errc::InvalidParameter, "fold_iters must be >= 1");

  // Map the target vocabulary onto the model's; out-of-vocabulary terms
  // are dropped and counted.
  std::unordered_map<std::string, std::uint32_t> model_index;
  model_index.reserve(model.vocab.size());
  for (std::size_t i = 0; i < model.vocab.size(); ++i)
    model_index.emplace(model.vocab[i], static_cast<std::uint32_t>(i));
  std::vector<std::int64_t> term_map(dtm.n, -1);
  std::size_t overlap = 0;
  for (std::size_t i = 0; i < dtm.vocab.size(); ++i) {
    auto it = model_index.find(dtm.vocab[i]);
    if (it != model_index.end()) {
      term_map[i] = it->second;
      ++overlap;
    }
  }
  if (overlap == 0)
    fail(Errc::EmptyVocabularyOverlap,
         "target vocabulary shares no terms with the model");

  FoldInReport local;
  DocTopicMatrix out;
  out.symbol_ids = symbols.ids;
  out.source_model = model.training_hash;
  out.rows.resize(static_cast<Eigen::Index>(symbols.ids.size()), model.cfg.k);

  const std::string seed_base = "foldin\n" + model.training_hash + "\n" +
                                dtm.digest() + "\n" +
                                std::to_string(fold_iters) + "\n";
  for (std::size_t s = 0; s < symbols.ids.size(); ++s) {
    const auto doc = dtm.doc_index(symbols.ids[s]);
    if (!doc)
      fail(Errc::SymbolNotFound,
           "symbol '" + symbols.ids[s] + "' not in the matrix");
    std::vector<std::uint32_t> tokens;
    for (const auto& [term, count] : dtm.rows[*doc]) {
      if (term_map[term] < 0) {
        local.dropped_tokens += count;
        continue;
      }
      for (std::uint32_t c = 0; c < count; ++c)
        tokens.push_back(static_cast<std::uint32_t>(term_map[term]));
    }
    local.kept_tokens += tokens.size();
    // Seed depends on the document alone: symbol order is irrelevant.
    const std::uint64_t seed = sha256_seed(seed_base + symbols.ids[s]);
    out.rows.row(static_cast<Eigen::Index>(s)) =
        fold_in_document(model, tokens, fold_iters, seed).transpose();
  }
  if (report) *report = local;
  return out;
}

relations::Representation represent_symbols(const TopicModel& model,
                                            const DocTermMatrix& dtm,
                                            const SymbolSet& symbols,
                                            int fold_iters,
                                            const Provenance& base) {
  const DocTopicMatrix doc_topic =
      infer_doc_topics(model, dtm, symbols, fold_iters);
  relations::Representation rep;
  rep.rows = doc_topic.rows;
  rep.symbol_ids = doc_topic.symbol_ids;
  rep.provenance = base;
  if (!rep.provenance.has("artifact.dtm"))
    rep.provenance.add("artifact.dtm", dtm.digest());
  rep.provenance.add("artifact.symbols", symbols.digest());
  rep.provenance.add("artifact.train_dtm", model.train_dtm_digest);
  model.cfg.stamp(rep.provenance);
  rep.provenance.add("lda.fold_iters", std::int64_t{fold_iters});
  return rep;
}

void save_model(const TopicModel& model, const std::string& path) {
  model.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::IoError, "cannot write '" + path + "'");
  out << "LDAM1 " << model.cfg.k << ' ' << model.vocab.size() << ' '
      << model.training_hash << ' ' << model.train_dtm_digest << '\n';
  out << format_full(model.cfg.alpha) << ' ' << format_full(model.cfg.beta)
      << ' ' << model.cfg.iterations << ' ' << model.cfg.burn_in << ' '
      << model.cfg.sample_lag << ' ' << model.cfg.seed << '\n';
  for (const auto& term : model.vocab) out << term << '\n';
  for (Eigen::Index t = 0; t < model.topic_word.rows(); ++t) {
    for (Eigen::Index w = 0; w < model.topic_word.cols(); ++w) {
      if (w) out << ' ';
      out << format_full(model.topic_word(t, w));
    }
    out << '\n';
  }
  if (!out) fail(Errc::IoError, "short write to '" + path + "'");
}

TopicModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::UnreadablePath, "cannot open '" + path + "'");
  std::string magic;
  std::size_t n = 0;
  TopicModel model;
  if (!(in >> magic >> model.cfg.k >> n >> model.training_hash >>
        model.train_dtm_digest) ||
      magic != "LDAM1")
    fail(Errc::MalformedRecord, path + ": bad LDAM1 header");
  if (!(in >> model.cfg.alpha >> model.cfg.beta >> model.cfg.iterations >>
        model.cfg.burn_in >> model.cfg.sample_lag >> model.cfg.seed))
    fail(Errc::MalformedRecord, path + ": bad hyperparameter line");
  std::string line;
  std::getline(in, line);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::getline(in, line))
      fail(Errc::MalformedRecord, path + ": truncated vocabulary");
    model.vocab.push_back(line);
  }
  model.topic_word.resize(model.cfg.k, static_cast<Eigen::Index>(n));
  for (Eigen::Index t = 0; t < model.cfg.k; ++t)
    for (Eigen::Index w = 0; w < static_cast<Eigen::Index>(n); ++w)
      if (!(in >> model.topic_word(t, w)))
        fail(Errc::MalformedRecord, path + ": truncated topic matrix");
  model.validate();
  return model;
}

}  // namespace geometria::lda

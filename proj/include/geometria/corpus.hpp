#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "geometria/provenance.hpp"

namespace geometria::corpus {

struct RawCorpus {
  // Ordered (doc_id, text) pairs; ids unique and non-empty, order stable
  // across loads of the same file.
  std::vector<std::pair<std::string, std::string>> docs;

  std::size_t size() const { return docs.size(); }
};

enum class CorpusFormat { Lines, Csv, Dir };

CorpusFormat parse_corpus_format(const std::string& name);

// Reads a corpus from disk. `lines`: one document per line, ids "0","1",...;
// `csv`: header doc_id,text with RFC-4180 quoting; `dir`: one .txt per
// document, doc_id = file stem, sorted by filename.
RawCorpus ingest_corpus(const std::string& path, CorpusFormat format);

struct PreprocessConfig {
  bool lowercase = true;
  // ECMAScript pattern matched over each document; every match is a token.
  std::string token_pattern = "[A-Za-z0-9']+";
  std::set<std::string> stopwords;  // applied after case normalization
  int min_term_count = 5;
  std::optional<int> max_vocab;

  void validate() const;

  // The bundled English stopword list (~150 words).
  static std::set<std::string> default_stopwords();
  static std::set<std::string> stopwords_from_file(const std::string& path);
};

struct DocTermMatrix {
  std::size_t m = 0;  // documents
  std::size_t n = 0;  // vocabulary size
  // Per-document sparse rows of (term index, count), term indices ascending.
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> rows;
  std::vector<std::string> vocab;    // lexicographic order
  std::vector<std::string> doc_ids;  // corpus order

  std::uint64_t total_tokens() const;
  std::uint64_t doc_tokens(std::size_t doc) const;
  std::size_t nnz() const;

  // Digest over dimensions, vocab, ids and triplets; the provenance value
  // standing for "this matrix".
  std::string digest() const;

  std::optional<std::size_t> doc_index(const std::string& id) const;
};

struct PreprocessResult {
  DocTermMatrix dtm;
  // Documents whose token stream emptied out; the rows are kept all-zero.
  std::vector<std::string> zero_token_docs;
};

// The four-step representation chain: case normalization, tokenization,
// stopword removal, counting. Steps are exposed so the composition can be
// tested against the fused pipeline.
std::string normalize_case(const std::string& text, bool lowercase);
std::vector<std::string> tokenize(const std::string& text,
                                  const std::string& token_pattern);
std::vector<std::string> remove_stopwords(std::vector<std::string> tokens,
                                          const std::set<std::string>& stop);
PreprocessResult count_tokens(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& docs,
    const PreprocessConfig& cfg);

PreprocessResult preprocess(const RawCorpus& corpus,
                            const PreprocessConfig& cfg);

struct SymbolSet {
  std::vector<std::string> ids;  // unique, |ids| >= 2
  std::string level = "document";

  void validate() const;
  std::string digest() const;
};

// Seeded uniform sample of `size` document ids without replacement; the id
// order is the sampled order.
SymbolSet sample_symbols(const DocTermMatrix& dtm, std::size_t size,
                         std::uint64_t seed);

SymbolSet all_symbols(const DocTermMatrix& dtm);

struct SynthParams {
  int k_true = 2;
  int m = 100;             // documents
  int n = 50;              // vocabulary size (words "w0".."w{n-1}")
  int doc_len = 50;        // tokens per document
  double concentration = 0.1;
  std::uint64_t seed = 1;
  // Optional override for the document stream; same `seed` with a different
  // doc_seed reuses the topic-word distributions on fresh documents.
  std::optional<std::uint64_t> doc_seed;

  void validate() const;
};

struct SynthCorpus {
  RawCorpus corpus;
  // Ground truth for test oracles: m x k_true doc-topic mixtures and
  // k_true x n topic-word distributions.
  std::vector<std::vector<double>> true_doc_topic;
  std::vector<std::vector<double>> true_topic_word;
  Provenance provenance;
};

// Generates documents by the standard mixed-membership process: topic-word
// rows and per-doc mixtures drawn from symmetric Dirichlet(concentration),
// then doc_len tokens per document. Deterministic for fixed params.
SynthCorpus synth_corpus(const SynthParams& params);

// Sparse triplet persistence: "<m> <n> <nnz>" header then "row col count"
// lines, with .vocab / .docids sidecars (one entry per line).
void save_dtm(const DocTermMatrix& dtm, const std::string& path);
DocTermMatrix load_dtm(const std::string& path);

}  // namespace geometria::corpus

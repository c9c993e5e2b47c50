#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "geometria/corpus.hpp"
#include "geometria/experiments.hpp"

namespace geometria::cli {

// The declarative run configuration: a flat, typed key-value text file with
// one section per module ([corpus], [preprocess], [symbols], [lda],
// [ensemble], [measures], [output]). Its digest (over the semantics-bearing
// sections) roots every phi digest the run produces.
struct RunConfig {
  // [corpus]
  std::string source = "synth";  // "synth" or a file/directory path
  std::string format = "lines";  // lines | csv | dir (file corpora only)
  corpus::SynthParams synth;

  // [preprocess]
  bool lowercase = true;
  std::string token_pattern = "[A-Za-z0-9']+";
  std::string stopwords = "none";  // none | builtin | <path>
  int min_term_count = 1;
  std::optional<int> max_vocab;

  // [symbols]
  std::size_t symbol_size = 0;  // 0 = every document
  std::optional<std::uint64_t> symbol_seed;  // default derived from master

  // [lda]
  double alpha = 0.0;  // 0 selects 1/k
  double beta = 0.01;
  int iterations = 1000;
  int burn_in = 500;
  int sample_lag = 50;
  int fold_iters = 200;

  // [ensemble]
  std::vector<int> topic_counts = {2, 5, 10, 20};
  std::size_t seed_count = 5;                // used when seed_list is empty
  std::vector<std::uint64_t> seed_list;

  // [measures]
  std::string d = "jsd2";
  std::string delta = "procrustes-std";
  std::string delta_prime = "pearson";
  std::size_t n_random = 10;
  double null_c = 1.0;

  // [output]
  std::filesystem::path out_dir = "out";
  std::filesystem::path store_dir;  // default: <out_dir>/store
  std::uint64_t master_seed = 1;

  void validate() const;

  // Digest over modeling decisions only; output locations are excluded so
  // the cache address of a structure does not depend on where it is kept.
  std::string digest() const;

  // Resolved store root: --store flag > config > GEOMETRIA_STORE > default.
  std::filesystem::path resolved_store() const;

  std::vector<std::uint64_t> resolved_seeds() const;
  std::uint64_t resolved_symbol_seed() const;
  experiments::EnsembleSpec ensemble_spec() const;
  corpus::PreprocessConfig preprocess_config() const;
};

RunConfig parse_run_config_text(const std::string& text,
                                const std::string& origin = "<string>");
RunConfig load_run_config(const std::string& path);

}  // namespace geometria::cli

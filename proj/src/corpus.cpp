#include "geometria/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "geometria/errors.hpp"
#include "geometria/rng.hpp"
#include "geometria/sha256.hpp"

namespace geometria::corpus {

namespace fs = std::filesystem;

CorpusFormat parse_corpus_format(const std::string& name) {
  if (name == "lines") return CorpusFormat::Lines;
  if (name == "csv") return CorpusFormat::Csv;
  if (name == "dir") return CorpusFormat::Dir;
  fail(Errc::InvalidParameter, "unknown corpus format '" + name + "'");
}

namespace {

void check_unique_ids(const RawCorpus& corpus) {
  std::unordered_set<std::string> seen;
  for (const auto& [id, text] : corpus.docs) {
    if (id.empty()) fail(Errc::MalformedRecord, "empty doc_id");
    if (!seen.insert(id).second)
      fail(Errc::DuplicateId, "duplicate doc_id '" + id + "'");
  }
}

RawCorpus ingest_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::UnreadablePath, "cannot open '" + path + "'");
  RawCorpus corpus;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    corpus.docs.emplace_back(std::to_string(lineno), line);
    ++lineno;
  }
  return corpus;
}

// Minimal RFC-4180 reader: quoted fields, "" escapes, embedded commas and
// newlines inside quotes.
std::vector<std::vector<std::string>> read_csv(std::istream& in,
                                               const std::string& path) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  char c;
  auto end_field = [&] {
    record.push_back(field);
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(record);
    record.clear();
  };
  while (in.get(c)) {
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started && !field.empty())
          fail(Errc::MalformedRecord,
               path + ": stray quote in record " +
                   std::to_string(records.size() + 1));
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        break;
      default:
        field.push_back(c);
        field_started = true;
        break;
    }
  }
  if (in_quotes)
    fail(Errc::MalformedRecord, path + ": unterminated quote at end of file");
  if (field_started || !record.empty()) end_record();
  return records;
}

RawCorpus ingest_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::UnreadablePath, "cannot open '" + path + "'");
  const auto records = read_csv(in, path);
  if (records.empty())
    fail(Errc::ZeroDocuments, path + " contains no records");
  if (records.front().size() < 2 || records.front()[0] != "doc_id" ||
      records.front()[1] != "text")
    fail(Errc::MalformedRecord, path + ": expected header 'doc_id,text'");
  RawCorpus corpus;
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].size() != 2)
      fail(Errc::MalformedRecord, path + ": record " + std::to_string(i + 1) +
                                      " has " +
                                      std::to_string(records[i].size()) +
                                      " fields, expected 2");
    corpus.docs.emplace_back(records[i][0], records[i][1]);
  }
  return corpus;
}

RawCorpus ingest_dir(const std::string& path) {
  if (!fs::is_directory(path))
    fail(Errc::UnreadablePath, "'" + path + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(path)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt")
      files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  RawCorpus corpus;
  for (const auto& file : files) {
    std::ifstream in(file, std::ios::binary);
    if (!in) fail(Errc::UnreadablePath, "cannot open '" + file.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    corpus.docs.emplace_back(file.stem().string(), text.str());
  }
  return corpus;
}

}  // namespace

RawCorpus ingest_corpus(const std::string& path, CorpusFormat format) {
  RawCorpus corpus;
  switch (format) {
    case CorpusFormat::Lines: corpus = ingest_lines(path); break;
    case CorpusFormat::Csv: corpus = ingest_csv(path); break;
    case CorpusFormat::Dir: corpus = ingest_dir(path); break;
  }
  if (corpus.docs.empty())
    fail(Errc::ZeroDocuments, "'" + path + "' yielded no documents");
  check_unique_ids(corpus);
  return corpus;
}

void PreprocessConfig::validate() const {
  if (min_term_count < 0)
    fail(Errc::InvalidConfig, "min_term_count must be >= 0");
  if (max_vocab && *max_vocab < 1)
    fail(Errc::InvalidConfig, "max_vocab must be >= 1");
  if (token_pattern.empty())
    fail(Errc::InvalidConfig, "token_pattern must be non-empty");
}

std::set<std::string> PreprocessConfig::stopwords_from_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::UnreadablePath, "cannot open stopword file '" + path + "'");
  std::set<std::string> words;
  std::string word;
  while (in >> word) words.insert(word);
  return words;
}

std::string normalize_case(const std::string& text, bool lowercase) {
  if (!lowercase) return text;
  std::string out = text;
  for (char& c : out)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> tokenize(const std::string& text,
                                  const std::string& token_pattern) {
  std::regex re;
  try {
    re = std::regex(token_pattern);
  } catch (const std::regex_error& e) {
    fail(Errc::InvalidConfig,
         std::string("bad token_pattern: ") + e.what());
  }
  std::vector<std::string> tokens;
  auto begin = std::sregex_iterator(text.begin(), text.end(), re);
  for (auto it = begin; it != std::sregex_iterator(); ++it)
    tokens.push_back(it->str());
  return tokens;
}

std::vector<std::string> remove_stopwords(std::vector<std::string> tokens,
                                          const std::set<std::string>& stop) {
  std::erase_if(tokens,
                [&](const std::string& t) { return stop.count(t) > 0; });
  return tokens;
}

PreprocessResult count_tokens(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& docs,
    const PreprocessConfig& cfg) {
  // Corpus frequency per term.
  std::map<std::string, std::uint64_t> corpus_freq;
  for (const auto& [id, tokens] : docs)
    for (const auto& t : tokens) ++corpus_freq[t];

  // Prune by min_term_count, then truncate to max_vocab by descending
  // frequency with lexicographic tie-break; final vocab order is
  // lexicographic so it is independent of document order.
  std::vector<std::pair<std::string, std::uint64_t>> surviving;
  for (const auto& [term, freq] : corpus_freq) {
    if (freq >= static_cast<std::uint64_t>(cfg.min_term_count))
      surviving.emplace_back(term, freq);
  }
  if (cfg.max_vocab && surviving.size() > static_cast<std::size_t>(*cfg.max_vocab)) {
    std::sort(surviving.begin(), surviving.end(),
              [](const auto& a, const auto& b) {
                if (a.second != b.second) return a.second > b.second;
                return a.first < b.first;
              });
    surviving.resize(static_cast<std::size_t>(*cfg.max_vocab));
  }
  std::sort(surviving.begin(), surviving.end());

  if (surviving.empty())
    fail(Errc::EmptyVocabulary, "no terms survive pruning");

  PreprocessResult result;
  DocTermMatrix& dtm = result.dtm;
  dtm.vocab.reserve(surviving.size());
  std::unordered_map<std::string, std::uint32_t> term_index;
  for (const auto& [term, freq] : surviving) {
    term_index.emplace(term, static_cast<std::uint32_t>(dtm.vocab.size()));
    dtm.vocab.push_back(term);
  }
  dtm.n = dtm.vocab.size();
  dtm.m = docs.size();
  dtm.rows.resize(dtm.m);

  for (std::size_t d = 0; d < docs.size(); ++d) {
    dtm.doc_ids.push_back(docs[d].first);
    std::map<std::uint32_t, std::uint32_t> counts;
    for (const auto& t : docs[d].second) {
      auto it = term_index.find(t);
      if (it != term_index.end()) ++counts[it->second];
    }
    dtm.rows[d].assign(counts.begin(), counts.end());
    if (dtm.rows[d].empty()) result.zero_token_docs.push_back(docs[d].first);
  }
  return result;
}

PreprocessResult preprocess(const RawCorpus& corpus,
                            const PreprocessConfig& cfg) {
  cfg.validate();
  if (corpus.docs.empty()) fail(Errc::ZeroDocuments, "empty corpus");
  std::vector<std::pair<std::string, std::vector<std::string>>> docs;
  docs.reserve(corpus.docs.size());
  for (const auto& [id, text] : corpus.docs) {
    auto tokens = tokenize(normalize_case(text, cfg.lowercase),
                           cfg.token_pattern);
    docs.emplace_back(id, remove_stopwords(std::move(tokens), cfg.stopwords));
  }
  return count_tokens(docs, cfg);
}

std::uint64_t DocTermMatrix::total_tokens() const {
  std::uint64_t total = 0;
  for (const auto& row : rows)
    for (const auto& [term, count] : row) total += count;
  return total;
}

std::uint64_t DocTermMatrix::doc_tokens(std::size_t doc) const {
  std::uint64_t total = 0;
  for (const auto& [term, count] : rows[doc]) total += count;
  return total;
}

std::size_t DocTermMatrix::nnz() const {
  std::size_t total = 0;
  for (const auto& row : rows) total += row.size();
  return total;
}

std::string DocTermMatrix::digest() const {
  Sha256 h;
  h.update("dtm\n");
  h.update(std::to_string(m) + " " + std::to_string(n) + "\n");
  for (const auto& id : doc_ids) h.update(id + "\n");
  for (const auto& term : vocab) h.update(term + "\n");
  for (std::size_t d = 0; d < rows.size(); ++d) {
    for (const auto& [term, count] : rows[d]) {
      h.update(std::to_string(d) + " " + std::to_string(term) + " " +
               std::to_string(count) + "\n");
    }
  }
  return h.hex();
}

std::optional<std::size_t> DocTermMatrix::doc_index(
    const std::string& id) const {
  for (std::size_t i = 0; i < doc_ids.size(); ++i)
    if (doc_ids[i] == id) return i;
  return std::nullopt;
}

void SymbolSet::validate() const {
  if (ids.size() < 2)
    fail(Errc::TooFewSymbols, "a geometry needs at least one pair of symbols");
  std::unordered_set<std::string> seen;
  for (const auto& id : ids)
    if (!seen.insert(id).second)
      fail(Errc::DuplicateId, "duplicate symbol id '" + id + "'");
}

std::string SymbolSet::digest() const {
  Sha256 h;
  h.update("symbols " + level + "\n");
  for (const auto& id : ids) h.update(id + "\n");
  return h.hex();
}

SymbolSet sample_symbols(const DocTermMatrix& dtm, std::size_t size,
                         std::uint64_t seed) {
  if (size < 2 || size > dtm.m)
    fail(Errc::SizeOutOfRange,
         "sample size " + std::to_string(size) + " not in [2, " +
             std::to_string(dtm.m) + "]");
  std::vector<std::size_t> indices(dtm.m);
  for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
  Rng rng(seed);
  SymbolSet symbols;
  symbols.ids.reserve(size);
  // Partial Fisher-Yates; the selection order is the sampled order.
  for (std::size_t i = 0; i < size; ++i) {
    const std::size_t j =
        i + static_cast<std::size_t>(uniform_below(rng, indices.size() - i));
    std::swap(indices[i], indices[j]);
    symbols.ids.push_back(dtm.doc_ids[indices[i]]);
  }
  return symbols;
}

SymbolSet all_symbols(const DocTermMatrix& dtm) {
  SymbolSet symbols;
  symbols.ids = dtm.doc_ids;
  symbols.validate();
  return symbols;
}

void SynthParams::validate() const {
  if (k_true < 1) fail(Errc::InvalidParameter, "k_true must be >= 1");
  if (m < 1) fail(Errc::InvalidParameter, "m must be >= 1");
  if (n < k_true) fail(Errc::InvalidParameter, "n must be >= k_true");
  if (doc_len < 1) fail(Errc::InvalidParameter, "doc_len must be >= 1");
  if (!(concentration > 0.0))
    fail(Errc::InvalidParameter, "concentration must be > 0");
}

SynthCorpus synth_corpus(const SynthParams& params) {
  params.validate();
  const auto k = static_cast<std::size_t>(params.k_true);
  const auto n = static_cast<std::size_t>(params.n);
  const auto m = static_cast<std::size_t>(params.m);

  SynthCorpus out;
  out.true_topic_word.reserve(k);
  // Topic and document streams are split so that the same topics can be
  // paired with a fresh document draw (doc_seed).
  Rng topic_rng(params.seed);
  for (std::size_t t = 0; t < k; ++t)
    out.true_topic_word.push_back(
        dirichlet_draw(topic_rng, params.concentration, n));

  const std::uint64_t doc_seed =
      params.doc_seed ? *params.doc_seed : params.seed ^ 0x9e3779b97f4a7c15ULL;
  Rng doc_rng(doc_seed);
  out.true_doc_topic.reserve(m);
  for (std::size_t d = 0; d < m; ++d) {
    const auto theta = dirichlet_draw(doc_rng, params.concentration, k);
    std::string text;
    for (int i = 0; i < params.doc_len; ++i) {
      const std::size_t topic =
          categorical_from_cumulative(doc_rng, theta.data(), k, 1.0);
      const auto& phi = out.true_topic_word[topic];
      const std::size_t word =
          categorical_from_cumulative(doc_rng, phi.data(), n, 1.0);
      if (!text.empty()) text += ' ';
      text += 'w' + std::to_string(word);
    }
    out.corpus.docs.emplace_back(std::to_string(d), std::move(text));
    out.true_doc_topic.push_back(theta);
  }

  out.provenance.add("corpus.source", "synth");
  out.provenance.add("corpus.k_true", std::int64_t{params.k_true});
  out.provenance.add("corpus.m", std::int64_t{params.m});
  out.provenance.add("corpus.n", std::int64_t{params.n});
  out.provenance.add("corpus.doc_len", std::int64_t{params.doc_len});
  out.provenance.add("corpus.concentration", params.concentration);
  out.provenance.add("corpus.seed",
                     std::int64_t(static_cast<std::int64_t>(params.seed)));
  out.provenance.add("corpus.doc_seed",
                     std::int64_t(static_cast<std::int64_t>(doc_seed)));
  return out;
}

void save_dtm(const DocTermMatrix& dtm, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::IoError, "cannot write '" + path + "'");
  out << dtm.m << ' ' << dtm.n << ' ' << dtm.nnz() << '\n';
  for (std::size_t d = 0; d < dtm.rows.size(); ++d)
    for (const auto& [term, count] : dtm.rows[d])
      out << d << ' ' << term << ' ' << count << '\n';
  if (!out) fail(Errc::IoError, "short write to '" + path + "'");

  std::ofstream vocab_out(path + ".vocab", std::ios::binary);
  if (!vocab_out) fail(Errc::IoError, "cannot write '" + path + ".vocab'");
  for (const auto& term : dtm.vocab) vocab_out << term << '\n';

  std::ofstream ids_out(path + ".docids", std::ios::binary);
  if (!ids_out) fail(Errc::IoError, "cannot write '" + path + ".docids'");
  for (const auto& id : dtm.doc_ids) ids_out << id << '\n';
}

DocTermMatrix load_dtm(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::UnreadablePath, "cannot open '" + path + "'");
  DocTermMatrix dtm;
  std::size_t nnz = 0;
  if (!(in >> dtm.m >> dtm.n >> nnz))
    fail(Errc::MalformedRecord, path + ": bad header");
  dtm.rows.resize(dtm.m);
  for (std::size_t i = 0; i < nnz; ++i) {
    std::size_t row;
    std::uint32_t col, count;
    if (!(in >> row >> col >> count))
      fail(Errc::MalformedRecord,
           path + ": bad triplet " + std::to_string(i + 1));
    if (row >= dtm.m || col >= dtm.n)
      fail(Errc::MalformedRecord,
           path + ": triplet " + std::to_string(i + 1) + " out of bounds");
    dtm.rows[row].emplace_back(col, count);
  }
  for (auto& row : dtm.rows) std::sort(row.begin(), row.end());

  std::ifstream vocab_in(path + ".vocab");
  if (!vocab_in) fail(Errc::UnreadablePath, "cannot open '" + path + ".vocab'");
  std::string line;
  while (std::getline(vocab_in, line)) dtm.vocab.push_back(line);
  if (dtm.vocab.size() != dtm.n)
    fail(Errc::MalformedRecord, path + ".vocab: expected " +
                                    std::to_string(dtm.n) + " terms");

  std::ifstream ids_in(path + ".docids");
  if (!ids_in) fail(Errc::UnreadablePath, "cannot open '" + path + ".docids'");
  while (std::getline(ids_in, line)) dtm.doc_ids.push_back(line);
  if (dtm.doc_ids.size() != dtm.m)
    fail(Errc::MalformedRecord, path + ".docids: expected " +
                                    std::to_string(dtm.m) + " ids");
  return dtm;
}

}  // namespace geometria::corpus

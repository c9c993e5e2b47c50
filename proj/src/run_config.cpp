#include "geometria/run_config.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "geometria/errors.hpp"
#include "geometria/sha256.hpp"

namespace geometria::cli {

namespace {

struct FlatConfig {
  // "section.key" -> (value, line number)
  std::map<std::string, std::pair<std::string, int>> entries;
  std::string origin;

  std::optional<std::string> get(const std::string& path) const {
    auto it = entries.find(path);
    if (it == entries.end()) return std::nullopt;
    return it->second.first;
  }

  [[noreturn]] void bad(const std::string& path, const std::string& why) const {
    const auto it = entries.find(path);
    const std::string where =
        it == entries.end()
            ? origin
            : origin + ":" + std::to_string(it->second.second);
    fail(Errc::ConfigParse, where + ": key '" + path + "' " + why);
  }

  std::string get_string(const std::string& path, const std::string& dflt) const {
    const auto v = get(path);
    return v ? *v : dflt;
  }

  bool get_bool(const std::string& path, bool dflt) const {
    const auto v = get(path);
    if (!v) return dflt;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    bad(path, "expects a boolean, got '" + *v + "'");
  }

  std::int64_t get_int(const std::string& path, std::int64_t dflt) const {
    const auto v = get(path);
    if (!v) return dflt;
    try {
      std::size_t used = 0;
      const std::int64_t parsed = std::stoll(*v, &used);
      if (used != v->size()) throw std::invalid_argument("trailing");
      return parsed;
    } catch (const std::exception&) {
      bad(path, "expects an integer, got '" + *v + "'");
    }
  }

  std::uint64_t get_u64(const std::string& path, std::uint64_t dflt) const {
    const auto v = get(path);
    if (!v) return dflt;
    try {
      std::size_t used = 0;
      const std::uint64_t parsed = std::stoull(*v, &used);
      if (used != v->size()) throw std::invalid_argument("trailing");
      return parsed;
    } catch (const std::exception&) {
      bad(path, "expects an unsigned integer, got '" + *v + "'");
    }
  }

  double get_double(const std::string& path, double dflt) const {
    const auto v = get(path);
    if (!v) return dflt;
    try {
      std::size_t used = 0;
      const double parsed = std::stod(*v, &used);
      if (used != v->size()) throw std::invalid_argument("trailing");
      return parsed;
    } catch (const std::exception&) {
      bad(path, "expects a number, got '" + *v + "'");
    }
  }

  template <typename T, typename Parse>
  std::vector<T> get_list(const std::string& path, Parse parse) const {
    const auto v = get(path);
    std::vector<T> out;
    if (!v) return out;
    std::stringstream ss(*v);
    std::string part;
    while (std::getline(ss, part, ',')) {
      // trim
      const auto b = part.find_first_not_of(" \t");
      const auto e = part.find_last_not_of(" \t");
      if (b == std::string::npos) bad(path, "has an empty list element");
      part = part.substr(b, e - b + 1);
      try {
        out.push_back(parse(part));
      } catch (const std::exception&) {
        bad(path, "has a malformed list element '" + part + "'");
      }
    }
    if (out.empty()) bad(path, "expects a non-empty list");
    return out;
  }
};

FlatConfig parse_flat(const std::string& text, const std::string& origin) {
  FlatConfig cfg;
  cfg.origin = origin;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  static const std::set<std::string> known_sections = {
      "corpus", "preprocess", "symbols", "lda",
      "ensemble", "measures", "output"};
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    if (line.front() == '[') {
      if (line.back() != ']')
        fail(Errc::ConfigParse, origin + ":" + std::to_string(lineno) +
                                    ": unterminated section header");
      section = line.substr(1, line.size() - 2);
      if (!known_sections.count(section))
        fail(Errc::ConfigParse, origin + ":" + std::to_string(lineno) +
                                    ": unknown section '" + section + "'");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(Errc::ConfigParse, origin + ":" + std::to_string(lineno) +
                                  ": expected 'key = value'");
    if (section.empty())
      fail(Errc::ConfigParse, origin + ":" + std::to_string(lineno) +
                                  ": key outside any [section]");
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    const auto kb = key.find_first_not_of(" \t");
    const auto ke = key.find_last_not_of(" \t");
    key = kb == std::string::npos ? "" : key.substr(kb, ke - kb + 1);
    const auto vb = value.find_first_not_of(" \t");
    const auto ve = value.find_last_not_of(" \t");
    value = vb == std::string::npos ? "" : value.substr(vb, ve - vb + 1);
    if (key.empty())
      fail(Errc::ConfigParse,
           origin + ":" + std::to_string(lineno) + ": empty key");
    const std::string path = section + "." + key;
    if (cfg.entries.count(path))
      fail(Errc::ConfigParse, origin + ":" + std::to_string(lineno) +
                                  ": duplicate key '" + path + "'");
    cfg.entries[path] = {value, lineno};
  }
  return cfg;
}

}  // namespace

RunConfig parse_run_config_text(const std::string& text,
                                const std::string& origin) {
  const FlatConfig flat = parse_flat(text, origin);
  RunConfig rc;

  rc.source = flat.get_string("corpus.source", rc.source);
  rc.format = flat.get_string("corpus.format", rc.format);
  rc.synth.k_true = int(flat.get_int("corpus.k_true", rc.synth.k_true));
  rc.synth.m = int(flat.get_int("corpus.m", rc.synth.m));
  rc.synth.n = int(flat.get_int("corpus.n", rc.synth.n));
  rc.synth.doc_len = int(flat.get_int("corpus.doc_len", rc.synth.doc_len));
  rc.synth.concentration =
      flat.get_double("corpus.concentration", rc.synth.concentration);
  if (flat.get("corpus.seed"))
    rc.synth.seed = flat.get_u64("corpus.seed", 0);

  rc.lowercase = flat.get_bool("preprocess.lowercase", rc.lowercase);
  rc.token_pattern =
      flat.get_string("preprocess.token_pattern", rc.token_pattern);
  rc.stopwords = flat.get_string("preprocess.stopwords", rc.stopwords);
  rc.min_term_count =
      int(flat.get_int("preprocess.min_term_count", rc.min_term_count));
  if (flat.get("preprocess.max_vocab"))
    rc.max_vocab = int(flat.get_int("preprocess.max_vocab", 0));

  rc.symbol_size =
      std::size_t(flat.get_int("symbols.size", std::int64_t(rc.symbol_size)));
  if (flat.get("symbols.seed"))
    rc.symbol_seed = flat.get_u64("symbols.seed", 0);

  rc.alpha = flat.get_double("lda.alpha", rc.alpha);
  rc.beta = flat.get_double("lda.beta", rc.beta);
  rc.iterations = int(flat.get_int("lda.iterations", rc.iterations));
  rc.burn_in = int(flat.get_int("lda.burn_in", rc.burn_in));
  rc.sample_lag = int(flat.get_int("lda.sample_lag", rc.sample_lag));
  rc.fold_iters = int(flat.get_int("lda.fold_iters", rc.fold_iters));

  if (flat.get("ensemble.k"))
    rc.topic_counts = flat.get_list<int>(
        "ensemble.k", [](const std::string& s) { return std::stoi(s); });
  rc.seed_count =
      std::size_t(flat.get_int("ensemble.seeds", std::int64_t(rc.seed_count)));
  if (flat.get("ensemble.seed_list"))
    rc.seed_list = flat.get_list<std::uint64_t>(
        "ensemble.seed_list",
        [](const std::string& s) { return std::stoull(s); });

  rc.d = flat.get_string("measures.d", rc.d);
  rc.delta = flat.get_string("measures.delta", rc.delta);
  rc.delta_prime = flat.get_string("measures.delta_prime", rc.delta_prime);
  rc.n_random =
      std::size_t(flat.get_int("measures.n_random", std::int64_t(rc.n_random)));
  rc.null_c = flat.get_double("measures.null_c", rc.null_c);

  rc.out_dir = flat.get_string("output.dir", rc.out_dir.string());
  rc.store_dir = flat.get_string("output.store", rc.store_dir.string());
  rc.master_seed = flat.get_u64("output.master_seed", rc.master_seed);

  rc.validate();
  return rc;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::UnreadablePath, "cannot open config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config_text(text.str(), path);
}

void RunConfig::validate() const {
  if (source.empty()) fail(Errc::InvalidConfig, "corpus.source is empty");
  if (source == "synth") synth.validate();
  else corpus::parse_corpus_format(format);
  if (min_term_count < 0)
    fail(Errc::InvalidConfig, "preprocess.min_term_count must be >= 0");
  if (iterations < 1 || burn_in < 0 || burn_in >= iterations)
    fail(Errc::InvalidConfig, "lda schedule invalid");
  if (topic_counts.empty()) fail(Errc::InvalidConfig, "ensemble.k is empty");
  if (seed_list.empty() && seed_count < 1)
    fail(Errc::InvalidConfig, "ensemble.seeds must be >= 1");
  relations::measure_by_id(d);
  structcmp::structural_measure(delta);
  structcmp::structural_measure(delta_prime);
  if (!(null_c > 0.0)) fail(Errc::InvalidConfig, "measures.null_c must be > 0");
}

std::string RunConfig::digest() const {
  Provenance p;
  p.add("config.source", source);
  if (source == "synth") {
    p.add("config.k_true", std::int64_t{synth.k_true});
    p.add("config.m", std::int64_t{synth.m});
    p.add("config.n", std::int64_t{synth.n});
    p.add("config.doc_len", std::int64_t{synth.doc_len});
    p.add("config.concentration", synth.concentration);
    p.add("config.corpus_seed", std::int64_t(std::int64_t(synth.seed)));
  } else {
    p.add("config.format", format);
  }
  p.add("config.lowercase", lowercase ? "true" : "false");
  p.add("config.token_pattern", token_pattern);
  p.add("config.stopwords", stopwords);
  p.add("config.min_term_count", std::int64_t{min_term_count});
  p.add("config.max_vocab",
        max_vocab ? std::to_string(*max_vocab) : "unset");
  p.add("config.symbol_size", std::int64_t(std::int64_t(symbol_size)));
  p.add("config.symbol_seed",
        symbol_seed ? std::to_string(*symbol_seed) : "derived");
  p.add("config.alpha", alpha);
  p.add("config.beta", beta);
  p.add("config.iterations", std::int64_t{iterations});
  p.add("config.burn_in", std::int64_t{burn_in});
  p.add("config.sample_lag", std::int64_t{sample_lag});
  p.add("config.fold_iters", std::int64_t{fold_iters});
  std::string ks;
  for (const int k : topic_counts) ks += std::to_string(k) + ",";
  p.add("config.k_list", ks);
  std::string seeds;
  for (const auto s : resolved_seeds()) seeds += std::to_string(s) + ",";
  p.add("config.seed_list", seeds);
  p.add("config.d", d);
  p.add("config.delta", delta);
  p.add("config.delta_prime", delta_prime);
  p.add("config.n_random", std::int64_t(std::int64_t(n_random)));
  p.add("config.null_c", null_c);
  p.add("config.master_seed", std::int64_t(std::int64_t(master_seed)));
  return p.digest();
}

std::filesystem::path RunConfig::resolved_store() const {
  if (!store_dir.empty()) return store_dir;
  if (const char* env = std::getenv("GEOMETRIA_STORE"); env && *env)
    return env;
  return out_dir / "store";
}

std::vector<std::uint64_t> RunConfig::resolved_seeds() const {
  if (!seed_list.empty()) return seed_list;
  return experiments::EnsembleSpec::draw_seeds(master_seed, seed_count);
}

std::uint64_t RunConfig::resolved_symbol_seed() const {
  if (symbol_seed) return *symbol_seed;
  return master_seed ^ 0x53595d8a11aa5eedULL;
}

experiments::EnsembleSpec RunConfig::ensemble_spec() const {
  experiments::EnsembleSpec spec;
  spec.topic_counts = topic_counts;
  spec.seeds = resolved_seeds();
  spec.lda_template.alpha = alpha;
  spec.lda_template.beta = beta;
  spec.lda_template.iterations = iterations;
  spec.lda_template.burn_in = burn_in;
  spec.lda_template.sample_lag = sample_lag;
  spec.fold_iters = fold_iters;
  spec.measure_d = d;
  return spec;
}

corpus::PreprocessConfig RunConfig::preprocess_config() const {
  corpus::PreprocessConfig prep;
  prep.lowercase = lowercase;
  prep.token_pattern = token_pattern;
  prep.min_term_count = min_term_count;
  prep.max_vocab = max_vocab;
  if (stopwords == "builtin")
    prep.stopwords = corpus::PreprocessConfig::default_stopwords();
  else if (stopwords != "none")
    prep.stopwords = corpus::PreprocessConfig::stopwords_from_file(stopwords);
  return prep;
}

}  // namespace geometria::cli

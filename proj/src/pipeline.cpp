#include "geometria/pipeline.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>

#include "geometria/errors.hpp"
#include "geometria/sha256.hpp"
#include "geometria/svg.hpp"

namespace geometria::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string corpus_digest(const corpus::RawCorpus& raw) {
  Sha256 h;
  h.update("raw-corpus\n");
  for (const auto& [id, text] : raw.docs) {
    h.update(id);
    h.update("\x1f");
    h.update(text);
    h.update("\x1e");
  }
  return h.hex();
}

std::string stopword_digest(const std::set<std::string>& words) {
  Sha256 h;
  for (const auto& w : words) {
    h.update(w);
    h.update("\n");
  }
  return h.hex();
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::IoError, "cannot write '" + path.string() + "'");
  out << content;
  if (!out) fail(Errc::IoError, "short write to '" + path.string() + "'");
}

std::string tag_of(const RunConfig& config) {
  return config.digest().substr(0, 12);
}

fs::path out_file(const RunConfig& config, const std::string& stem,
                  const std::string& ext) {
  return config.out_dir / (stem + "." + tag_of(config) + "." + ext);
}

}  // namespace

PipelineData prepare_data(const RunConfig& config) {
  config.validate();
  PipelineData data;

  corpus::RawCorpus raw;
  if (config.source == "synth") {
    auto synth = corpus::synth_corpus(config.synth);
    raw = std::move(synth.corpus);
    data.base = synth.provenance;
  } else {
    raw = corpus::ingest_corpus(config.source,
                                corpus::parse_corpus_format(config.format));
    data.base.add("corpus.source", "file");
    data.base.add("corpus.format", config.format);
    data.base.add("corpus.file_digest", corpus_digest(raw));
  }

  const auto prep = config.preprocess_config();
  data.base.add("preprocess.lowercase", prep.lowercase ? "true" : "false");
  data.base.add("preprocess.token_pattern", prep.token_pattern);
  data.base.add("preprocess.stopwords",
                prep.stopwords.empty() ? "none"
                                       : stopword_digest(prep.stopwords));
  data.base.add("preprocess.min_term_count",
                std::int64_t{prep.min_term_count});
  data.base.add("preprocess.max_vocab",
                prep.max_vocab ? std::to_string(*prep.max_vocab) : "unset");

  auto result = corpus::preprocess(raw, prep);
  data.dtm = std::move(result.dtm);
  data.zero_token_docs = std::move(result.zero_token_docs);

  if (config.symbol_size == 0 || config.symbol_size == data.dtm.m) {
    data.symbols = corpus::all_symbols(data.dtm);
    data.base.add("symbols.size", "all");
  } else {
    const auto seed = config.resolved_symbol_seed();
    data.symbols =
        corpus::sample_symbols(data.dtm, config.symbol_size, seed);
    data.base.add("symbols.size", std::int64_t(std::int64_t(config.symbol_size)));
    data.base.add("symbols.seed", std::int64_t(std::int64_t(seed)));
  }
  return data;
}

int cmd_ingest(const RunConfig& config, std::ostream& out) {
  const PipelineData data = prepare_data(config);
  const fs::path dtm_path = out_file(config, "dtm", "txt");
  fs::create_directories(config.out_dir);
  corpus::save_dtm(data.dtm, dtm_path.string());

  json report;
  report["documents"] = data.dtm.m;
  report["vocabulary"] = data.dtm.n;
  report["tokens"] = data.dtm.total_tokens();
  report["nnz"] = data.dtm.nnz();
  report["zero_token_docs"] = data.zero_token_docs;
  report["dtm_file"] = dtm_path.string();
  report["dtm_digest"] = data.dtm.digest();
  write_file(out_file(config, "ingest", "json"), report.dump(2) + "\n");

  out << "ingested " << data.dtm.m << " documents, vocabulary "
      << data.dtm.n << ", tokens " << data.dtm.total_tokens() << "\n";
  if (!data.zero_token_docs.empty())
    out << data.zero_token_docs.size()
        << " documents have zero surviving tokens\n";
  return 0;
}

int cmd_train(const RunConfig& config, std::ostream& out) {
  const PipelineData data = prepare_data(config);
  store::StructureStore store(config.resolved_store());
  const auto spec = config.ensemble_spec();
  spec.validate();
  for (const int k : spec.topic_counts) {
    for (const auto seed : spec.seeds) {
      const auto cfg = spec.member_config(k, seed);
      const auto hash = lda::training_hash(data.dtm, cfg);
      if (store.has_model(hash)) {
        out << "cached model k=" << k << " seed=" << seed << " " << hash
            << "\n";
        continue;
      }
      store.save_model(lda::train_lda(data.dtm, cfg));
      out << "trained model k=" << k << " seed=" << seed << " " << hash
          << "\n";
    }
  }
  return 0;
}

namespace {

std::vector<experiments::EnsembleEntry> ensure_ensemble(
    const RunConfig& config, const PipelineData& data,
    store::StructureStore& store, experiments::EnsembleBuildLog* log) {
  return experiments::build_ensemble(data.dtm, data.symbols,
                                     config.ensemble_spec(), store, data.base,
                                     log);
}

// Report-only path: loads every member from the store, never trains.
std::vector<experiments::EnsembleEntry> load_ensemble(
    const RunConfig& config, const PipelineData& data,
    const store::StructureStore& store) {
  const auto spec = config.ensemble_spec();
  spec.validate();
  std::vector<experiments::EnsembleEntry> entries;
  for (const int k : spec.topic_counts) {
    for (const auto seed : spec.seeds) {
      const auto cfg = spec.member_config(k, seed);
      const auto digest =
          experiments::member_provenance(data.base, data.dtm, data.symbols,
                                         cfg, spec.fold_iters, spec.measure_d)
              .digest();
      if (!store.has_structure(digest))
        fail(Errc::MissingInput,
             "structure for k=" + std::to_string(k) +
                 " seed=" + std::to_string(seed) +
                 " is not in the store; run `structure` first");
      entries.push_back({k, seed,
                         "lda.k=" + std::to_string(k) +
                             ",lda.seed=" + std::to_string(seed),
                         store.load_structure(digest), true});
    }
  }
  return entries;
}

json stats_json(const structcmp::GroupStats& stats) {
  return json{{"mean", stats.mean}, {"std", stats.stddev},
              {"count", stats.count}};
}

void emit_stability(const RunConfig& config,
                    const experiments::StabilityReport& report,
                    const std::vector<experiments::EnsembleEntry>& ensemble) {
  const std::string stem = "stability_k" + std::to_string(report.row.k);
  const std::string csv = experiments::stability_csv(report, ensemble);
  write_file(out_file(config, stem, "csv"), csv);

  svg::BoxplotSeries series;
  series.label = "k=" + std::to_string(report.row.k);
  series.values = report.row.within_values;
  write_file(out_file(config, stem, "svg"),
             svg::boxplot("Pairwise " + report.delta_id + " within k=" +
                              std::to_string(report.row.k),
                          {series}, csv));

  json summary;
  summary["k"] = report.row.k;
  summary["delta"] = report.delta_id;
  summary["lda_lda"] = stats_json(report.row.lda_lda);
  summary["lda_random"] = stats_json(report.row.lda_random);
  summary["lda_null"] = stats_json(report.row.lda_null);
  summary["n_random"] = report.n_random;
  summary["null_c"] = report.null_c;
  write_file(out_file(config, stem, "json"), summary.dump(2) + "\n");
}

void emit_ksweep(const RunConfig& config,
                 const experiments::KSweepReport& report) {
  const std::string csv = experiments::ksweep_csv(report);
  write_file(out_file(config, "ksweep", "csv"), csv);
  std::vector<std::string> labels;
  for (const int k : report.topic_counts)
    labels.push_back("k=" + std::to_string(k));
  write_file(out_file(config, "ksweep", "svg"),
             svg::heatmap("Mean " + report.delta_id +
                              " between dimensionality groups",
                          labels, report.mean_matrix, csv));
  json summary;
  summary["delta"] = report.delta_id;
  summary["k"] = report.topic_counts;
  for (Eigen::Index i = 0; i < report.mean_matrix.rows(); ++i) {
    std::vector<double> row;
    for (Eigen::Index j = 0; j < report.mean_matrix.cols(); ++j)
      row.push_back(report.mean_matrix(i, j));
    summary["mean_matrix"].push_back(row);
  }
  write_file(out_file(config, "ksweep", "json"), summary.dump(2) + "\n");
}

void emit_deltacmp(const RunConfig& config,
                   const experiments::AgreementReport& report) {
  const std::string stem =
      "deltacmp_" + report.delta_a_id + "_" + report.delta_b_id;
  const std::string csv = experiments::agreement_csv(report);
  write_file(out_file(config, stem, "csv"), csv);
  std::vector<std::pair<double, double>> points;
  for (const auto& pair : report.pairs)
    points.emplace_back(pair.value_b, pair.value_a);
  write_file(out_file(config, stem, "svg"),
             svg::scatter("Structural relation agreement", report.delta_b_id,
                          report.delta_a_id, points, csv));
  json summary;
  summary["delta_a"] = report.delta_a_id;
  summary["delta_b"] = report.delta_b_id;
  summary["pairs"] = report.pairs.size();
  summary["outer_correlation"] = report.outer_correlation;
  write_file(out_file(config, stem, "json"), summary.dump(2) + "\n");
}

}  // namespace

int cmd_structure(const RunConfig& config, std::ostream& out) {
  const PipelineData data = prepare_data(config);
  store::StructureStore store(config.resolved_store());
  experiments::EnsembleBuildLog log;
  const auto entries = ensure_ensemble(config, data, store, &log);

  json manifest;
  for (const auto& e : entries) {
    manifest["members"].push_back({{"k", e.k},
                                   {"seed", e.seed},
                                   {"digest", e.structure.phi_digest()}});
    out << (e.from_cache ? "cached " : "built ") << e.structure.phi_digest()
        << " k=" << e.k << " seed=" << e.seed << "\n";
  }
  manifest["trained_models"] = log.trained_models;
  manifest["cached_models"] = log.cached_models;
  manifest["built_structures"] = log.built_structures;
  manifest["cached_structures"] = log.cached_structures;
  write_file(out_file(config, "ensemble", "json"), manifest.dump(2) + "\n");
  out << "ensemble of " << entries.size() << " structures ("
      << log.built_structures << " built, " << log.cached_structures
      << " cached)\n";
  return 0;
}

int cmd_compare(const RunConfig& config, const std::string& a,
                const std::string& b, const std::string& delta_id,
                std::ostream& out) {
  store::StructureStore store(config.resolved_store());
  auto resolve = [&](const std::string& ref) {
    if (fs::exists(ref)) return relations::load_structure(ref);
    return store.load_structure(ref);
  };
  const auto sa = resolve(a);
  const auto sb = resolve(b);
  const auto delta = structcmp::structural_measure(delta_id);
  out << format_full(delta(sa, sb)) << "\n";
  return 0;
}

int cmd_stability(const RunConfig& config, int k, std::ostream& out) {
  const PipelineData data = prepare_data(config);
  store::StructureStore store(config.resolved_store());
  const auto entries = ensure_ensemble(config, data, store, nullptr);
  const auto delta = structcmp::structural_measure(config.delta);
  const auto report = experiments::stability_analysis(
      entries, k, config.n_random, delta, config.null_c);
  emit_stability(config, report, entries);
  out << "k=" << k << " " << report.delta_id
      << " lda-lda mean=" << format_value(report.row.lda_lda.mean)
      << " std=" << format_value(report.row.lda_lda.stddev) << " over "
      << report.row.lda_lda.count << " pairs\n";
  return 0;
}

int cmd_ksweep(const RunConfig& config, std::ostream& out) {
  const PipelineData data = prepare_data(config);
  store::StructureStore store(config.resolved_store());
  const auto entries = ensure_ensemble(config, data, store, nullptr);
  const auto delta = structcmp::structural_measure(config.delta);
  const auto report = experiments::k_sweep(entries, delta);
  emit_ksweep(config, report);
  out << "ksweep over " << report.topic_counts.size() << " values of k\n";
  return 0;
}

int cmd_deltacmp(const RunConfig& config, const std::string& delta_a,
                 const std::string& delta_b, std::ostream& out) {
  const PipelineData data = prepare_data(config);
  store::StructureStore store(config.resolved_store());
  const auto entries = ensure_ensemble(config, data, store, nullptr);
  const auto report = experiments::delta_agreement(
      entries, structcmp::structural_measure(delta_a),
      structcmp::structural_measure(delta_b));
  emit_deltacmp(config, report);
  out << report.pairs.size() << " pairs, outer correlation "
      << format_value(report.outer_correlation) << "\n";
  return 0;
}

int cmd_report(const RunConfig& config, std::ostream& out) {
  const PipelineData data = prepare_data(config);
  const store::StructureStore store(config.resolved_store());
  const auto entries = load_ensemble(config, data, store);
  const auto delta = structcmp::structural_measure(config.delta);

  const auto rows =
      experiments::stability_table(entries, config.n_random, delta,
                                   config.null_c);
  write_file(out_file(config, "stability_table", "csv"),
             experiments::stability_table_csv(rows));
  std::vector<svg::BoxplotSeries> series;
  for (const auto& row : rows)
    series.push_back({"k=" + std::to_string(row.k), row.within_values});
  write_file(out_file(config, "stability_boxplot", "svg"),
             svg::boxplot("Pairwise " + delta.id + " within each k", series,
                          experiments::stability_table_csv(rows)));
  for (const auto& row : rows) {
    experiments::StabilityReport report;
    report.row = row;
    report.delta_id = delta.id;
    report.n_random = config.n_random;
    report.null_c = config.null_c;
    emit_stability(config, report, entries);
  }

  emit_ksweep(config, experiments::k_sweep(entries, delta));
  emit_deltacmp(config,
                experiments::delta_agreement(
                    entries, structcmp::structural_measure(config.delta),
                    structcmp::structural_measure(config.delta_prime)));

  json index;
  index["config_digest"] = config.digest();
  index["members"] = entries.size();
  std::vector<std::uint64_t> seeds = config.resolved_seeds();
  index["seeds"] = seeds;
  index["k"] = config.topic_counts;
  write_file(out_file(config, "report", "json"), index.dump(2) + "\n");
  out << "report over " << entries.size() << " structures written to "
      << config.out_dir.string() << "\n";
  return 0;
}

int run_all(const RunConfig& config, std::ostream& out) {
  cmd_structure(config, out);
  return cmd_report(config, out);
}

}  // namespace geometria::cli

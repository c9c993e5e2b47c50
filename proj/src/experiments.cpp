#include "geometria/experiments.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "geometria/errors.hpp"
#include "geometria/rng.hpp"
#include "geometria/sha256.hpp"

namespace geometria::experiments {

void EnsembleSpec::validate() const {
  if (topic_counts.empty()) fail(Errc::InvalidConfig, "K must be non-empty");
  if (seeds.empty()) fail(Errc::InvalidConfig, "seed set must be non-empty");
  for (const int k : topic_counts)
    if (k < 1) fail(Errc::InvalidConfig, "every k must be >= 1");
  if (fold_iters < 1) fail(Errc::InvalidConfig, "fold_iters must be >= 1");
  std::set<int> k_seen(topic_counts.begin(), topic_counts.end());
  if (k_seen.size() != topic_counts.size())
    fail(Errc::DuplicateDecision, "duplicate k in ensemble spec");
  std::set<std::uint64_t> seed_seen(seeds.begin(), seeds.end());
  if (seed_seen.size() != seeds.size())
    fail(Errc::DuplicateDecision, "duplicate seed in ensemble spec");
}

std::vector<std::uint64_t> EnsembleSpec::draw_seeds(std::uint64_t master,
                                                    std::size_t count) {
  Rng rng(master ^ 0x5eedf00d5eedf00dULL);
  std::set<std::uint64_t> seen;
  std::vector<std::uint64_t> out;
  while (out.size() < count) {
    // Small readable seeds; collisions are redrawn.
    const std::uint64_t s = uniform_below(rng, 1'000'000'000ULL);
    if (seen.insert(s).second) out.push_back(s);
  }
  return out;
}

lda::LdaConfig EnsembleSpec::member_config(int k, std::uint64_t seed) const {
  lda::LdaConfig cfg = lda_template;
  cfg.k = k;
  cfg.seed = seed;
  if (cfg.alpha <= 0.0) cfg.alpha = 1.0 / double(k);
  cfg.validate();
  return cfg;
}

Provenance member_provenance(const Provenance& base, const DocTermMatrix& dtm,
                             const SymbolSet& symbols,
                             const lda::LdaConfig& cfg, int fold_iters,
                             const std::string& measure_id) {
  // Mirrors represent_symbols + structural_map exactly; a drift between the
  // two would silently break cache addressing, so tests pin them together.
  Provenance p = base;
  if (!p.has("artifact.dtm")) p.add("artifact.dtm", dtm.digest());
  p.add("artifact.symbols", symbols.digest());
  p.add("artifact.train_dtm", dtm.digest());
  cfg.stamp(p);
  p.add("lda.fold_iters", std::int64_t{fold_iters});
  p.add("measure.d", measure_id);
  return p;
}

namespace {

std::string member_label(int k, std::uint64_t seed) {
  return "lda.k=" + std::to_string(k) + ",lda.seed=" + std::to_string(seed);
}

}  // namespace

std::vector<EnsembleEntry> build_ensemble(const DocTermMatrix& dtm,
                                          const SymbolSet& symbols,
                                          const EnsembleSpec& spec,
                                          store::StructureStore& store,
                                          const Provenance& base,
                                          EnsembleBuildLog* log) {
  spec.validate();
  symbols.validate();
  const auto& measure = relations::measure_by_id(spec.measure_d);

  EnsembleBuildLog local;
  std::vector<EnsembleEntry> entries;
  entries.reserve(spec.topic_counts.size() * spec.seeds.size());
  for (const int k : spec.topic_counts) {
    for (const std::uint64_t seed : spec.seeds) {
      const lda::LdaConfig cfg = spec.member_config(k, seed);
      const Provenance expected =
          member_provenance(base, dtm, symbols, cfg, spec.fold_iters,
                            measure.id);
      const std::string digest = expected.digest();

      EnsembleEntry entry;
      entry.k = k;
      entry.seed = seed;
      entry.label = member_label(k, seed);
      if (store.has_structure(digest)) {
        entry.structure = store.load_structure(digest);
        entry.from_cache = true;
        ++local.cached_structures;
      } else {
        const std::string model_hash = lda::training_hash(dtm, cfg);
        lda::TopicModel model;
        if (auto cached = store.load_model(model_hash)) {
          model = std::move(*cached);
          ++local.cached_models;
        } else {
          model = lda::train_lda(dtm, cfg);
          store.save_model(model);
          ++local.trained_models;
        }
        const auto rep =
            lda::represent_symbols(model, dtm, symbols, spec.fold_iters, base);
        entry.structure = relations::structural_map(rep, measure);
        if (entry.structure.phi_digest() != digest)
          fail(Errc::StoreCorruption,
               "member digest drifted from its declared decision chain");
        store.save_structure(entry.structure);
        ++local.built_structures;
      }
      entries.push_back(std::move(entry));
    }
  }
  if (log) *log = local;
  return entries;
}

std::vector<Structure> random_baselines(const std::vector<std::string>& ids,
                                        std::size_t count,
                                        const std::string& context_digest) {
  std::vector<Structure> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t seed = sha256_seed(
        context_digest + "\nrandom-baseline\n" + std::to_string(i));
    out.push_back(
        relations::random_structure(ids, relations::RandomKind::Symmetric,
                                    seed));
  }
  return out;
}

namespace {

std::vector<const EnsembleEntry*> group_of(
    const std::vector<EnsembleEntry>& ensemble, int k) {
  std::vector<const EnsembleEntry*> group;
  for (const auto& e : ensemble)
    if (e.k == k) group.push_back(&e);
  return group;
}

std::vector<int> distinct_ks(const std::vector<EnsembleEntry>& ensemble) {
  std::set<int> ks;
  for (const auto& e : ensemble) ks.insert(e.k);
  return {ks.begin(), ks.end()};
}

}  // namespace

StabilityReport stability_analysis(const std::vector<EnsembleEntry>& ensemble,
                                   int k, std::size_t n_random,
                                   const StructuralMeasure& delta,
                                   double null_c) {
  const auto group = group_of(ensemble, k);
  if (group.size() < 2)
    fail(Errc::TooFewStructures,
         "stability needs >= 2 structures at k = " + std::to_string(k));

  // f(Psi_k | Phi, delta): only the seed varies inside the group.
  std::vector<structcmp::LabeledStructure> labeled;
  labeled.reserve(group.size());
  for (const auto* e : group)
    labeled.push_back({"lda.seed=" + std::to_string(e->seed), e->structure});
  const auto meta = structcmp::meta_structure(labeled, delta);

  StabilityReport report;
  report.delta_id = delta.id;
  report.n_random = n_random;
  report.null_c = null_c;
  report.row.k = k;
  const auto g = meta.matrix.rows();
  for (Eigen::Index i = 0; i < g; ++i)
    for (Eigen::Index j = i + 1; j < g; ++j)
      report.row.within_values.push_back(meta.matrix(i, j));
  report.row.lda_lda = structcmp::stats_of(report.row.within_values);

  std::vector<Structure> lda_structures;
  for (const auto* e : group) lda_structures.push_back(e->structure);
  const auto& ids = group.front()->structure.symbol_ids;

  const auto randoms =
      random_baselines(ids, n_random, meta.shared_phi.digest());
  report.row.lda_random = structcmp::group_mean_distance(
      lda_structures, randoms, delta);

  const std::vector<Structure> nulls = {relations::null_structure(ids, null_c)};
  report.row.lda_null =
      structcmp::group_mean_distance(lda_structures, nulls, delta);
  return report;
}

std::vector<StabilityRow> stability_table(
    const std::vector<EnsembleEntry>& ensemble, std::size_t n_random,
    const StructuralMeasure& delta, double null_c) {
  std::vector<StabilityRow> rows;
  for (const int k : distinct_ks(ensemble))
    rows.push_back(
        stability_analysis(ensemble, k, n_random, delta, null_c).row);
  return rows;
}

KSweepReport k_sweep(const std::vector<EnsembleEntry>& ensemble,
                     const StructuralMeasure& delta) {
  KSweepReport report;
  report.delta_id = delta.id;
  report.topic_counts = distinct_ks(ensemble);
  const auto& ks = report.topic_counts;
  if (ks.empty()) fail(Errc::TooFewStructures, "empty ensemble");

  std::vector<std::vector<Structure>> groups;
  for (const int k : ks) {
    std::vector<Structure> group;
    for (const auto* e : group_of(ensemble, k)) group.push_back(e->structure);
    if (group.size() < 2)
      fail(Errc::TooFewStructures,
           "k = " + std::to_string(k) + " has fewer than 2 structures");
    groups.push_back(std::move(group));
  }

  const auto n = static_cast<Eigen::Index>(ks.size());
  report.mean_matrix.resize(n, n);
  report.count_matrix.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const auto stats = structcmp::group_mean_distance(
          groups[static_cast<std::size_t>(i)],
          groups[static_cast<std::size_t>(j)], delta);
      report.mean_matrix(i, j) = stats.mean;
      report.mean_matrix(j, i) = stats.mean;
      report.count_matrix(i, j) = double(stats.count);
      report.count_matrix(j, i) = double(stats.count);
    }
  }
  return report;
}

double pearson_correlation(const std::vector<double>& x,
                           const std::vector<double>& y) {
  return structcmp::pearson_values(x, y);
}

AgreementReport delta_agreement(const std::vector<EnsembleEntry>& ensemble,
                                const StructuralMeasure& delta_a,
                                const StructuralMeasure& delta_b) {
  if (ensemble.size() < 3)
    fail(Errc::TooFewStructures,
         "delta agreement needs >= 3 structures for >= 3 pairs");
  AgreementReport report;
  report.delta_a_id = delta_a.id;
  report.delta_b_id = delta_b.id;
  std::vector<double> va, vb;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    for (std::size_t j = i + 1; j < ensemble.size(); ++j) {
      AgreementPair pair;
      pair.label_a = ensemble[i].label;
      pair.label_b = ensemble[j].label;
      pair.value_a = delta_a(ensemble[i].structure, ensemble[j].structure);
      pair.value_b = delta_b(ensemble[i].structure, ensemble[j].structure);
      va.push_back(pair.value_a);
      vb.push_back(pair.value_b);
      report.pairs.push_back(std::move(pair));
    }
  }
  report.outer_correlation = pearson_correlation(va, vb);
  return report;
}

namespace {

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

}  // namespace

std::string stability_csv(const StabilityReport& report,
                          const std::vector<EnsembleEntry>& ensemble) {
  const auto group = group_of(ensemble, report.row.k);
  std::ostringstream out;
  out << "k,seed_i,seed_j," << report.delta_id << "\n";
  std::size_t idx = 0;
  for (std::size_t i = 0; i < group.size(); ++i) {
    for (std::size_t j = i + 1; j < group.size(); ++j) {
      out << report.row.k << ',' << group[i]->seed << ',' << group[j]->seed
          << ',' << format_full(report.row.within_values[idx++]) << "\n";
    }
  }
  return out.str();
}

std::string stability_table_csv(const std::vector<StabilityRow>& rows) {
  std::ostringstream out;
  out << "k,n_pairs,lda_lda_mean,lda_lda_std,lda_random_mean,lda_random_std,"
         "lda_null_mean,lda_null_std\n";
  for (const auto& row : rows) {
    out << row.k << ',' << row.lda_lda.count << ','
        << format_full(row.lda_lda.mean) << ',' << format_full(row.lda_lda.stddev)
        << ',' << format_full(row.lda_random.mean) << ','
        << format_full(row.lda_random.stddev) << ','
        << format_full(row.lda_null.mean) << ','
        << format_full(row.lda_null.stddev) << "\n";
  }
  return out.str();
}

std::string ksweep_csv(const KSweepReport& report) {
  std::ostringstream out;
  out << "k_i,k_j,mean_" << report.delta_id << ",pair_count\n";
  for (Eigen::Index i = 0; i < report.mean_matrix.rows(); ++i)
    for (Eigen::Index j = 0; j < report.mean_matrix.cols(); ++j)
      out << report.topic_counts[static_cast<std::size_t>(i)] << ','
          << report.topic_counts[static_cast<std::size_t>(j)] << ','
          << format_full(report.mean_matrix(i, j)) << ','
          << static_cast<long long>(report.count_matrix(i, j)) << "\n";
  return out.str();
}

std::string agreement_csv(const AgreementReport& report) {
  std::ostringstream out;
  out << "model_i,model_j," << report.delta_a_id << ',' << report.delta_b_id
      << "\n";
  for (const auto& pair : report.pairs)
    out << csv_quote(pair.label_a) << ',' << csv_quote(pair.label_b) << ','
        << format_full(pair.value_a) << ',' << format_full(pair.value_b)
        << "\n";
  return out.str();
}

}  // namespace geometria::experiments

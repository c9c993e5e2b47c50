#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <string>

#include "geometria/errors.hpp"
#include "geometria/pipeline.hpp"

namespace {

using geometria::cli::RunConfig;

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  std::string store_dir;
  std::uint64_t master_seed = 0;
  bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("-c,--config", opts.config_path,
                  "run configuration file")->required();
  cmd->add_option("-o,--out", opts.out_dir, "override [output] dir");
  cmd->add_option("--store", opts.store_dir,
                  "override store root (also: GEOMETRIA_STORE)");
  cmd->add_option("--seed", opts.master_seed, "override master seed")
      ->each([&](const std::string&) { opts.seed_set = true; });
}

RunConfig resolve_config(const CommonOptions& opts) {
  RunConfig config = geometria::cli::load_run_config(opts.config_path);
  if (!opts.out_dir.empty()) config.out_dir = opts.out_dir;
  if (!opts.store_dir.empty()) config.store_dir = opts.store_dir;
  if (opts.seed_set) config.master_seed = opts.master_seed;
  return config;
}

void print_error(const geometria::Error& e) {
  std::cerr << "{\"error\":\"" << geometria::errc_name(e.code())
            << "\",\"message\":" << nlohmann::json(e.what()).dump() << "}\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geometria: latent symbol geometries and their comparison"};
  app.require_subcommand(1);

  CommonOptions opts;
  int stability_k = 0;
  std::string compare_a, compare_b;
  std::string delta_a = "procrustes-std", delta_b = "pearson";
  std::string compare_delta = "procrustes-std";

  auto* ingest = app.add_subcommand(
      "ingest", "read the corpus, build and persist the document-term matrix");
  add_common(ingest, opts);

  auto* train =
      app.add_subcommand("train", "train every ensemble model into the store");
  add_common(train, opts);

  auto* structure = app.add_subcommand(
      "structure", "build (or load) every ensemble structure");
  add_common(structure, opts);

  auto* compare = app.add_subcommand(
      "compare", "structural relation between two stored structures");
  add_common(compare, opts);
  compare->add_option("--a", compare_a, "structure digest or file")->required();
  compare->add_option("--b", compare_b, "structure digest or file")->required();
  compare->add_option("--delta", compare_delta, "structural measure id");

  auto* stability = app.add_subcommand(
      "stability", "seed-stability analysis at one value of k");
  add_common(stability, opts);
  stability->add_option("--k", stability_k, "topic count to analyze")
      ->required();

  auto* ksweep = app.add_subcommand(
      "ksweep", "mean structural distance between dimensionality groups");
  add_common(ksweep, opts);

  auto* deltacmp = app.add_subcommand(
      "deltacmp", "agreement between two structural relation measures");
  add_common(deltacmp, opts);
  deltacmp->add_option("--a", delta_a, "first structural measure id");
  deltacmp->add_option("--b", delta_b, "second structural measure id");

  auto* report = app.add_subcommand(
      "report", "regenerate all tables and plots from persisted artifacts");
  add_common(report, opts);

  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig config = resolve_config(opts);
    if (ingest->parsed()) return geometria::cli::cmd_ingest(config, std::cout);
    if (train->parsed()) return geometria::cli::cmd_train(config, std::cout);
    if (structure->parsed())
      return geometria::cli::cmd_structure(config, std::cout);
    if (compare->parsed())
      return geometria::cli::cmd_compare(config, compare_a, compare_b,
                                         compare_delta, std::cout);
    if (stability->parsed())
      return geometria::cli::cmd_stability(config, stability_k, std::cout);
    if (ksweep->parsed()) return geometria::cli::cmd_ksweep(config, std::cout);
    if (deltacmp->parsed())
      return geometria::cli::cmd_deltacmp(config, delta_a, delta_b, std::cout);
    if (report->parsed()) return geometria::cli::cmd_report(config, std::cout);
  } catch (const geometria::Error& e) {
    print_error(e);
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "{\"error\":\"Internal\",\"message\":"
              << nlohmann::json(e.what()).dump() << "}\n";
    return 2;
  }
  return 0;
}

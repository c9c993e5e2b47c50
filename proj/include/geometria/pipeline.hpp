#pragma once

#include <iosfwd>
#include <string>

#include "geometria/run_config.hpp"

namespace geometria::cli {

// Materialized inputs shared by every command: the document-term matrix,
// the symbol set, and the decision chain that produced them.
struct PipelineData {
  corpus::DocTermMatrix dtm;
  corpus::SymbolSet symbols;
  Provenance base;
  std::vector<std::string> zero_token_docs;
};

PipelineData prepare_data(const RunConfig& config);

// Command bodies behind the CLI; each returns a process exit code and is
// idempotent given the store.
int cmd_ingest(const RunConfig& config, std::ostream& out);
int cmd_train(const RunConfig& config, std::ostream& out);
int cmd_structure(const RunConfig& config, std::ostream& out);
int cmd_compare(const RunConfig& config, const std::string& a,
                const std::string& b, const std::string& delta_id,
                std::ostream& out);
int cmd_stability(const RunConfig& config, int k, std::ostream& out);
int cmd_ksweep(const RunConfig& config, std::ostream& out);
int cmd_deltacmp(const RunConfig& config, const std::string& delta_a,
                 const std::string& delta_b, std::ostream& out);
int cmd_report(const RunConfig& config, std::ostream& out);

// structure + every report; the full desk-scale pipeline in one call.
int run_all(const RunConfig& config, std::ostream& out);

}  // namespace geometria::cli

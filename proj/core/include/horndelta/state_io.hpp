#pragma once

#include <filesystem>
#include <string>

#include "horndelta/engine.hpp"

namespace horndelta {

// On-disk session layout:
//   manifest.tsv      mode, config knobs, applied batch hashes
//   schema.tsv        the schema the catalog is regenerated from
//   kb/               store + dictionary snapshot
//   scores.tsv        full cumulative table (no thresholds applied)
//   intermediate.tsv  vanilla only: `head sub obj rule_id` id rows
//   deltas/           one per-batch delta file per applied update
void save_state(const EngineState& state, const std::filesystem::path& dir,
                const std::string& schema_text);

EngineState load_state(const std::filesystem::path& dir);

// Runtime knobs may be retuned between updates (they never change results);
// mode and max_len are pinned by the manifest.
void override_runtime_knobs(EngineState& state, const RunConfig& knobs);

std::string read_file(const std::filesystem::path& path);

// Content hash used by the batch idempotence guard.
std::string batch_content_hash(const std::string& bytes);

// `rule_id template head body1 body2 metric d_numerator d_denominator` rows.
std::vector<std::string> emit_delta_rows(const ScoreDelta& delta, MetricKind kind,
                                         const RuleCatalog& catalog, const Dictionary& dict);

void write_delta_file(const std::filesystem::path& dir, std::uint64_t batch_number,
                      const ScoreDelta& delta, MetricKind kind, const RuleCatalog& catalog,
                      const Dictionary& dict);

}  // namespace horndelta

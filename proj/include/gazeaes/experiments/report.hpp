#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gazeaes/experiments/experiment.hpp"

namespace gazeaes::experiments {

/// Column-aligned text table; the first row is the header.
std::string render_table(const std::vector<std::vector<std::string>>& rows);

/// One row per report: system, QWK per target set, mean. Reports with
/// different target sets get blank cells where a set is missing.
void write_summary_table(std::ostream& out, std::span<const ExperimentReport* const> reports);
void write_summary_tsv(std::ostream& out, std::span<const ExperimentReport* const> reports);

/// Per-fold detail: QWK per set and fold, means, training sizes.
void write_fold_table(std::ostream& out, const ExperimentReport& report);

void write_folds_tsv(std::ostream& out, const ExperimentReport& report);
void write_predictions_csv(std::ostream& out, const ExperimentReport& report);
/// set, fold, then the epoch's key=value fields.
void write_history_tsv(std::ostream& out, const ExperimentReport& report);

void write_ablation_table(std::ostream& out, std::span<const AblationReport> ablations);
void write_ablation_tsv(std::ostream& out, std::span<const AblationReport> ablations);

void write_comparison(std::ostream& out, const Comparison& comparison);

void write_grid_search(std::ostream& out, const training::GridSearchResult& result);

/// Writes config.txt, report.txt, report.tsv, folds.tsv, predictions.csv,
/// history.tsv and logs/set<S>_fold<K>.log under `dir`.
void save_report(const std::filesystem::path& dir, const ExperimentReport& report);
/// Reads config.txt, folds.tsv and predictions.csv back; histories and logs
/// are not reloaded. Means are recomputed from the fold rows.
ExperimentReport load_report(const std::filesystem::path& dir);

}  // namespace gazeaes::experiments

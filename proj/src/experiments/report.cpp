#include "gazeaes/experiments/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "gazeaes/util/csv.hpp"
#include "gazeaes/util/kv_file.hpp"
#include "gazeaes/util/strings.hpp"

namespace gazeaes::experiments {

namespace {

std::string fixed(double v) { return util::format_fixed(v, 4); }

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

std::vector<int> union_sets(std::span<const ExperimentReport* const> reports) {
    std::set<int> sets;
    for (const auto* r : reports) {
        for (const auto& [set_id, q] : r->mean_qwk) sets.insert(set_id);
    }
    return {sets.begin(), sets.end()};
}

std::string system_label(const ExperimentReport& r) {
    std::string label = to_string(r.config.system);
    if (r.config.reader_filter.kind != gaze::ReaderFilter::Kind::all) label += " [" + r.config.reader_filter.to_string() + "]";
    if (r.config.ablate_attribute) label += " -" + std::string(gaze::short_name(*r.config.ablate_attribute));
    return label;
}

std::vector<std::string> split_tabs(const std::string& line) { return util::split(line, '\t'); }

}  // namespace

std::string render_table(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& row : rows) {
        if (width.size() < row.size()) width.resize(row.size(), 0);
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::ostringstream out;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::string line;
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            const auto& cell = rows[r][c];
            if (c == 0) {
                line += cell + std::string(width[c] - cell.size(), ' ');
            } else {
                line += "  " + std::string(width[c] - cell.size(), ' ') + cell;
            }
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out << line << '\n';
        if (r == 0) {
            std::size_t total = 0;
            for (std::size_t c = 0; c < width.size(); ++c) total += width[c] + (c ? 2 : 0);
            out << std::string(total, '-') << '\n';
        }
    }
    return out.str();
}

void write_summary_table(std::ostream& out, std::span<const ExperimentReport* const> reports) {
    const auto sets = union_sets(reports);
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{"System"};
    for (int s : sets) header.push_back("Set " + std::to_string(s));
    header.push_back("Mean QWK");
    rows.push_back(header);
    for (const auto* r : reports) {
        std::vector<std::string> row{system_label(*r)};
        for (int s : sets) {
            auto it = r->mean_qwk.find(s);
            row.push_back(it == r->mean_qwk.end() ? "" : fixed(it->second));
        }
        row.push_back(fixed(r->grand_mean_qwk));
        rows.push_back(row);
    }
    out << render_table(rows);
}

void write_summary_tsv(std::ostream& out, std::span<const ExperimentReport* const> reports) {
    const auto sets = union_sets(reports);
    out << "system";
    for (int s : sets) out << "\tset_" << s;
    out << "\tmean\n";
    for (const auto* r : reports) {
        out << system_label(*r);
        for (int s : sets) {
            auto it = r->mean_qwk.find(s);
            out << '\t' << (it == r->mean_qwk.end() ? "" : util::format_double(it->second));
        }
        out << '\t' << util::format_double(r->grand_mean_qwk) << '\n';
    }
}

void write_fold_table(std::ostream& out, const ExperimentReport& report) {
    std::vector<std::vector<std::string>> rows{
        {"Set", "Fold", "Test QWK", "Dev QWK", "Best epoch", "Train", "Dev", "Test", "Augmented", "Gaze essays"}};
    for (const auto& f : report.folds) {
        rows.push_back({std::to_string(f.set_id), std::to_string(f.fold_id), fixed(f.test_qwk),
                        std::isnan(f.best_dev_qwk) ? "nan" : fixed(f.best_dev_qwk), std::to_string(f.best_epoch),
                        std::to_string(f.train_size), std::to_string(f.dev_size), std::to_string(f.test_size),
                        std::to_string(f.augmented), std::to_string(f.gaze_essays)});
    }
    for (const auto& [set_id, q] : report.mean_qwk) {
        rows.push_back({std::to_string(set_id), "mean", fixed(q), "", "", "", "", "", "", ""});
    }
    rows.push_back({"all", "mean", fixed(report.grand_mean_qwk), "", "", "", "", "", "", ""});
    out << render_table(rows);
}

void write_folds_tsv(std::ostream& out, const ExperimentReport& report) {
    out << "set_id\tfold_id\tseed\ttest_qwk\tbest_dev_qwk\tbest_epoch\ttrain_size\tdev_size\ttest_size\taugmented"
           "\tgaze_essays\tleakage_checks\n";
    for (const auto& f : report.folds) {
        out << f.set_id << '\t' << f.fold_id << '\t' << f.seed << '\t' << util::format_double(f.test_qwk) << '\t'
            << (std::isnan(f.best_dev_qwk) ? std::string("nan") : util::format_double(f.best_dev_qwk)) << '\t'
            << f.best_epoch << '\t' << f.train_size << '\t' << f.dev_size << '\t' << f.test_size << '\t'
            << f.augmented << '\t' << f.gaze_essays << '\t' << f.leakage_checks << '\n';
    }
}

void write_predictions_csv(std::ostream& out, const ExperimentReport& report) {
    out << "set_id,fold_id,essay_id,normalized,predicted,actual\n";
    for (const auto& p : report.predictions) {
        out << p.set_id << ',' << p.fold_id << ',' << p.essay_id << ',' << util::format_double(p.normalized) << ','
            << p.predicted << ',' << p.actual << '\n';
    }
}

void write_history_tsv(std::ostream& out, const ExperimentReport& report) {
    for (const auto& f : report.folds) {
        for (const auto& e : f.history) {
            out << "set=" << f.set_id << "\tfold=" << f.fold_id << '\t';
            auto line = training::format_epoch_line(e);
            std::replace(line.begin(), line.end(), ' ', '\t');
            out << line << '\n';
        }
    }
}

void write_ablation_table(std::ostream& out, std::span<const AblationReport> ablations) {
    std::set<int> sets;
    for (const auto& a : ablations) {
        for (const auto& [s, d] : a.delta_qwk) sets.insert(s);
    }
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{"Ablated attribute"};
    for (int s : sets) header.push_back("Set " + std::to_string(s));
    header.push_back("Full QWK");
    header.push_back("Ablated QWK");
    header.push_back("Difference");
    rows.push_back(header);
    for (const auto& a : ablations) {
        std::vector<std::string> row{std::string(gaze::long_name(a.attribute))};
        for (int s : sets) {
            auto it = a.delta_qwk.find(s);
            row.push_back(it == a.delta_qwk.end() ? "" : fixed(it->second));
        }
        row.push_back(fixed(a.full.grand_mean_qwk));
        row.push_back(fixed(a.ablated.grand_mean_qwk));
        row.push_back(fixed(a.delta_grand_mean));
        rows.push_back(row);
    }
    out << render_table(rows);
}

void write_ablation_tsv(std::ostream& out, std::span<const AblationReport> ablations) {
    out << "attribute\tset_id\tfull_qwk\tablated_qwk\tdelta_qwk\n";
    for (const auto& a : ablations) {
        for (const auto& [s, d] : a.delta_qwk) {
            out << gaze::short_name(a.attribute) << '\t' << s << '\t' << util::format_double(a.full.mean_qwk.at(s))
                << '\t' << util::format_double(a.ablated.mean_qwk.at(s)) << '\t' << util::format_double(d) << '\n';
        }
        out << gaze::short_name(a.attribute) << "\tmean\t" << util::format_double(a.full.grand_mean_qwk) << '\t'
            << util::format_double(a.ablated.grand_mean_qwk) << '\t' << util::format_double(a.delta_grand_mean) << '\n';
    }
}

void write_comparison(std::ostream& out, const Comparison& c) {
    out << "baseline: " << c.baseline << '\n' << "candidate: " << c.candidate << '\n' << "pairing: " << c.pairing << '\n';
    std::vector<std::vector<std::string>> rows{{"Scope", "n", "Mean diff", "t", "p", "p < 0.05"}};
    auto add = [&](const std::string& scope, const metrics::SignificanceResult& r) {
        rows.push_back({scope, std::to_string(r.n_pairs), util::format_fixed(r.mean_difference, 6),
                        util::format_fixed(r.t_statistic, 4), util::format_fixed(r.p_value, 6),
                        r.significant() ? "yes" : "no"});
    };
    for (const auto& [s, r] : c.per_set) add("set " + std::to_string(s), r);
    add("overall", c.overall);
    out << render_table(rows);
}

void write_grid_search(std::ostream& out, const training::GridSearchResult& result) {
    std::set<double> weights;
    for (const auto& [a, by_w] : result.mean_mse) {
        for (const auto& [w, m] : by_w) weights.insert(w);
    }
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{"Attribute"};
    for (double w : weights) header.push_back("w=" + util::format_double(w));
    header.push_back("Best");
    rows.push_back(header);
    for (const auto& [a, by_w] : result.mean_mse) {
        std::vector<std::string> row{std::string(gaze::short_name(a))};
        for (double w : weights) {
            auto it = by_w.find(w);
            row.push_back(it == by_w.end() ? "" : util::format_fixed(it->second, 6));
        }
        row.push_back(util::format_double(result.best_weights.at(a)));
        rows.push_back(row);
    }
    out << "search: per attribute, other attributes off; selection: lowest mean dev gaze MSE, ties to smaller weight\n";
    out << render_table(rows);
}

void save_report(const std::filesystem::path& dir, const ExperimentReport& report) {
    std::filesystem::create_directories(dir / "logs");
    {
        auto out = open_out(dir / "config.txt");
        for (const auto& [k, v] : report.config.to_map()) out << k << " = " << v << '\n';
    }
    {
        auto out = open_out(dir / "report.txt");
        const ExperimentReport* one[] = {&report};
        write_summary_table(out, one);
        out << '\n';
        write_fold_table(out, report);
    }
    {
        auto out = open_out(dir / "report.tsv");
        const ExperimentReport* one[] = {&report};
        write_summary_tsv(out, one);
    }
    {
        auto out = open_out(dir / "folds.tsv");
        write_folds_tsv(out, report);
    }
    {
        auto out = open_out(dir / "predictions.csv");
        write_predictions_csv(out, report);
    }
    {
        auto out = open_out(dir / "history.tsv");
        write_history_tsv(out, report);
    }
    for (const auto& f : report.folds) {
        auto out = open_out(dir / "logs" / ("set" + std::to_string(f.set_id) + "_fold" + std::to_string(f.fold_id) + ".log"));
        for (const auto& w : f.warnings) out << "warning=\"" << w << "\"\n";
        out << f.log;
    }
}

ExperimentReport load_report(const std::filesystem::path& dir) {
    ExperimentReport report;
    const auto config = util::KeyValueFile::load(dir / "config.txt");
    report.config = ExperimentConfig::from_map(config.values());

    std::ifstream folds(dir / "folds.tsv");
    if (!folds) throw std::runtime_error("cannot read " + (dir / "folds.tsv").string());
    std::string line;
    std::getline(folds, line);  // header
    while (std::getline(folds, line)) {
        if (util::trim(line).empty()) continue;
        const auto f = split_tabs(line);
        if (f.size() < 12) throw std::runtime_error((dir / "folds.tsv").string() + ": short row '" + line + "'");
        FoldResult r;
        r.set_id = static_cast<int>(util::parse_int(f[0]).value());
        r.fold_id = static_cast<int>(util::parse_int(f[1]).value());
        r.seed = static_cast<std::uint64_t>(util::parse_int(f[2]).value());
        r.test_qwk = util::parse_double(f[3]).value();
        r.best_dev_qwk = f[4] == "nan" ? std::nan("") : util::parse_double(f[4]).value();
        r.best_epoch = static_cast<std::size_t>(util::parse_int(f[5]).value());
        r.train_size = static_cast<std::size_t>(util::parse_int(f[6]).value());
        r.dev_size = static_cast<std::size_t>(util::parse_int(f[7]).value());
        r.test_size = static_cast<std::size_t>(util::parse_int(f[8]).value());
        r.augmented = static_cast<std::size_t>(util::parse_int(f[9]).value());
        r.gaze_essays = static_cast<std::size_t>(util::parse_int(f[10]).value());
        r.leakage_checks = static_cast<std::size_t>(util::parse_int(f[11]).value());
        report.folds.push_back(std::move(r));
    }

    std::ifstream preds(dir / "predictions.csv");
    if (!preds) throw std::runtime_error("cannot read " + (dir / "predictions.csv").string());
    std::getline(preds, line);
    while (std::getline(preds, line)) {
        if (util::trim(line).empty()) continue;
        const auto f = util::split_csv_line(line);
        if (f.size() != 6) throw std::runtime_error((dir / "predictions.csv").string() + ": bad row '" + line + "'");
        EssayPrediction p;
        p.set_id = static_cast<int>(util::parse_int(f[0]).value());
        p.fold_id = static_cast<int>(util::parse_int(f[1]).value());
        p.essay_id = util::parse_int(f[2]).value();
        p.normalized = util::parse_double(f[3]).value();
        p.predicted = static_cast<int>(util::parse_int(f[4]).value());
        p.actual = static_cast<int>(util::parse_int(f[5]).value());
        report.predictions.push_back(p);
    }
    report.recompute_means();
    return report;
}

}  // namespace gazeaes::experiments

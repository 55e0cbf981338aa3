#include "gazeaes/training/grid_search.hpp"

#include <cmath>
#include <stdexcept>

#include "gazeaes/util/jobs.hpp"

namespace gazeaes::training {

GridSearchResult grid_search_gaze_weights(const GridCellRunner& run_cell,
                                          std::span<const gaze::GazeAttribute> attributes,
                                          std::span<const double> grid, std::size_t folds, std::uint64_t seed,
                                          std::size_t jobs) {
    if (grid.empty()) throw std::invalid_argument("grid search: empty weight grid");
    if (attributes.empty()) throw std::invalid_argument("grid search: no gaze attributes");
    if (folds == 0) throw std::invalid_argument("grid search: no folds");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (grid[i] == grid[j]) throw std::invalid_argument("grid search: duplicate weight in grid");
        }
    }

    GridSearchResult result;
    for (auto attr : attributes) {
        for (double w : grid) {
            for (std::size_t f = 0; f < folds; ++f) {
                GridCell cell;
                cell.index = result.cells.size();
                cell.attribute = attr;
                cell.weight = w;
                cell.fold = f;
                cell.seed = seed + cell.index;
                result.cells.push_back(cell);
            }
        }
    }

    auto failures = util::run_jobs(result.cells.size(), jobs, [&](std::size_t i) {
        const double mse = run_cell(result.cells[i]);
        if (!std::isfinite(mse)) throw std::runtime_error("non-finite dev gaze MSE");
        result.cells[i].dev_gaze_mse = mse;
    });
    if (!failures.empty()) {
        std::string message = "grid search: " + std::to_string(failures.size()) + " cell(s) failed";
        for (const auto& f : failures) {
            result.failures.push_back("cell " + std::to_string(f.index) + ": " + f.message);
            message += "; " + result.failures.back();
        }
        throw std::runtime_error(message);
    }

    for (const auto& cell : result.cells) {
        result.mean_mse[cell.attribute][cell.weight] += cell.dev_gaze_mse / static_cast<double>(folds);
    }
    for (const auto& [attr, by_weight] : result.mean_mse) {
        // by_weight is ordered by increasing weight, so strict < keeps the
        // smaller weight on a tie.
        double best_w = by_weight.begin()->first;
        double best_mse = by_weight.begin()->second;
        for (const auto& [w, mse] : by_weight) {
            if (mse < best_mse) {
                best_mse = mse;
                best_w = w;
            }
        }
        result.best_weights[attr] = best_w;
    }
    return result;
}

}  // namespace gazeaes::training

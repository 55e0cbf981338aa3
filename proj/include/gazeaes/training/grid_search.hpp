#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gazeaes/gaze/attributes.hpp"

namespace gazeaes::training {

/// One training run of the search: a single attribute switched on at one
/// weight (all others at 0), trained on one fold.
struct GridCell {
    std::size_t index = 0;
    gaze::GazeAttribute attribute = gaze::GazeAttribute::dwell_time;
    double weight = 0.0;
    std::size_t fold = 0;
    std::uint64_t seed = 0;  // base seed + index
    double dev_gaze_mse = 0.0;
};

/// Trains and returns the dev-set gaze MSE of cell.attribute.
using GridCellRunner = std::function<double(const GridCell&)>;

struct GridSearchResult {
    std::map<gaze::GazeAttribute, double> best_weights;
    /// Mean dev gaze MSE over folds for every (attribute, weight).
    std::map<gaze::GazeAttribute, std::map<double, double>> mean_mse;
    std::vector<GridCell> cells;
    std::vector<std::string> failures;  // "cell <i>: <message>"
};

/// Each attribute is searched on its own. The weight with the lowest mean dev
/// gaze MSE wins; ties go to the smaller weight. Throws std::invalid_argument
/// for an empty grid, no attributes, or zero folds, and std::runtime_error
/// if any cell fails (after all cells have run).
GridSearchResult grid_search_gaze_weights(const GridCellRunner& run_cell,
                                          std::span<const gaze::GazeAttribute> attributes,
                                          std::span<const double> grid, std::size_t folds, std::uint64_t seed,
                                          std::size_t jobs = 1);

}  // namespace gazeaes::training

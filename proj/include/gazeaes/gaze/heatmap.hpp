#pragma once

#include <iosfwd>

#include "gazeaes/corpus/essay.hpp"
#include "gazeaes/gaze/attributes.hpp"

namespace gazeaes::gaze {

/// Plot input: one row per token with its five bins (blank when absent).
/// Columns: position,token,DT,FFD,IR,RC,Skip
void write_heatmap_csv(std::ostream& out, const corpus::Essay& essay, const BinnedGaze& gaze);

/// Terminal rendering of one attribute: each token followed by its bin in
/// brackets, e.g. "the[0] cat[3]", wrapped at `width` columns. Absent tokens
/// show "[-]".
void write_heatmap_text(std::ostream& out, const corpus::Essay& essay, const BinnedGaze& gaze,
                        GazeAttribute attribute, std::size_t width = 80);

}  // namespace gazeaes::gaze

#include "gazeaes/gaze/heatmap.hpp"

#include <ostream>
#include <stdexcept>

#include "gazeaes/util/csv.hpp"

namespace gazeaes::gaze {
namespace {

void check_alignment(const corpus::Essay& essay, const BinnedGaze& gaze) {
    if (gaze.tokens.size() != essay.token_count()) {
        throw std::invalid_argument("heat map: essay " + std::to_string(essay.essay_id) + " has " +
                                    std::to_string(essay.token_count()) + " tokens but gaze covers " +
                                    std::to_string(gaze.tokens.size()));
    }
}

}  // namespace

void write_heatmap_csv(std::ostream& out, const corpus::Essay& essay, const BinnedGaze& gaze) {
    check_alignment(essay, gaze);
    out << "position,token";
    for (auto a : kAllGazeAttributes) out << ',' << short_name(a);
    out << '\n';
    const auto tokens = essay.flat_tokens();
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        out << i << ',' << util::csv_escape(tokens[i]);
        for (auto a : kAllGazeAttributes) {
            out << ',';
            if (gaze.tokens[i].present) out << gaze.tokens[i].bin(a);
        }
        out << '\n';
    }
}

void write_heatmap_text(std::ostream& out, const corpus::Essay& essay, const BinnedGaze& gaze,
                        GazeAttribute attribute, std::size_t width) {
    check_alignment(essay, gaze);
    out << "essay " << essay.essay_id << " reader " << gaze.reader_id << " " << short_name(attribute) << '\n';
    const auto tokens = essay.flat_tokens();
    std::size_t column = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const std::string cell = tokens[i] + "[" +
                                 (gaze.tokens[i].present ? std::to_string(gaze.tokens[i].bin(attribute)) : "-") + "]";
        if (column > 0 && column + 1 + cell.size() > width) {
            out << '\n';
            column = 0;
        }
        if (column > 0) {
            out << ' ';
            ++column;
        }
        out << cell;
        column += cell.size();
    }
    out << '\n';
}

}  // namespace gazeaes::gaze

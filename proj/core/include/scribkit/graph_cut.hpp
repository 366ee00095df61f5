#pragma once

#include <cstdint>
#include <vector>

#include "scribkit/error.hpp"
#include "scribkit/expansion.hpp"
#include "scribkit/raster.hpp"
#include "scribkit/slic.hpp"

namespace scribkit {

// Binary labeling energy:
//   sum_i cost[label_i] + sum_(a,b) weight * [label_a != label_b]
// with optional hard labels. Label 1 is foreground (source side).
struct BinaryLabelingProblem {
    struct Edge {
        int a = 0;
        int b = 0;
        double weight = 0.0;
    };

    std::vector<double> cost_foreground;
    std::vector<double> cost_background;
    std::vector<Edge> edges;
    // -1 free, 0 forced background, 1 forced foreground; empty means all free.
    std::vector<std::int8_t> hard;

    std::size_t size() const { return cost_foreground.size(); }
};

struct BinaryLabeling {
    std::vector<std::uint8_t> labels;
    double cut_cost = 0.0;  // max-flow value
};

BinaryLabeling solve_min_cut(const BinaryLabelingProblem& problem);

// Raised when the superpixel graph has no foreground- or no background-seeded
// node; the caller should fall back to the statistic foreground as y_c.
class MissingSeedsError : public ParameterError {
public:
    using ParameterError::ParameterError;
};

struct GraphCutResult {
    TriLabel content;                         // y_c, values in {0,1}
    std::vector<std::uint8_t> cluster_labels;  // per superpixel
    double cut_cost = 0.0;
    double sigma = 0.0;
    std::size_t foreground_seeded = 0;
    std::size_t background_seeded = 0;
    std::size_t conflicting = 0;  // clusters holding both seed kinds (kept foreground)
};

// Superpixel graph cut. Seeded clusters get infinite terminal links (a cluster
// holding both kinds is foreground). Unseeded clusters pay d_fg/(d_fg+d_bg) to
// be foreground and d_bg/(d_fg+d_bg) to be background, d being the CIELAB
// distance to the pixel-weighted mean color of the foreground-/background-
// seeded clusters. 4-adjacent clusters pay gc_lambda*exp(-|ci-cj|^2/(2 sigma^2))
// when separated.
GraphCutResult graph_cut(const SuperpixelMap& sp, const SeedSet& seeds, const ExpansionConfig& cfg);

}  // namespace scribkit

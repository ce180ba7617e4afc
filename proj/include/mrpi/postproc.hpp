#pragma once

#include "mrpi/grid.hpp"
#include "mrpi/rpi.hpp"

namespace mrpi {

/// Closed interval [p_low, p_up] around the zero level, on the normalized field.
struct ThresholdBand {
    double p_low = -0.175;
    double p_up = 0.075;

    /// Requires p_low <= 0 <= p_up and p_low < p_up.
    void validate() const;
};

/// Divides every entry by max|phi| + min|phi|. Throws DegenerateInputError on
/// an all-zero field.
AveragedField normalize_field(const AveragedField& phi_bar);

/// 1 where p_low <= value <= p_up (both ends inclusive), else 0.
BinaryEdgeMap threshold_band(const Grid<double>& normalized, const ThresholdBand& band);

enum class MajorityRule {
    /// Vote of the 8 neighbours only: 1 if at least 5 are set, 0 otherwise
    /// (a 4-4 tie clears the pixel).
    NeighborsTieClears,
    /// Vote over the full 3x3 window, centre included: 1 if at least 5 of 9 are set.
    CenterInclusive,
};

/// One synchronous majority pass, or repeated passes until nothing changes.
/// Pixels outside the image count as 0. A period-2 oscillation is broken by
/// keeping only the pixels set in both states and iterating on.
BinaryEdgeMap majority_smooth(const BinaryEdgeMap& edges, bool repeat_until_stable,
                              MajorityRule rule = MajorityRule::NeighborsTieClears);

/// Two-subiteration thinning. Each subiteration marks Zhang-Suen deletion
/// candidates (plus staircase corners) from a snapshot of the map, then commits
/// them in raster order, skipping any pixel that is no longer 8-simple, that
/// has become an end point, or that belongs to an isolated 2x2 square. The
/// number of 8-connected components and of holes is therefore preserved.
/// Stops after max_iters iterations or when an iteration deletes nothing.
BinaryEdgeMap thin(const BinaryEdgeMap& edges, int max_iters);

struct PostprocOptions {
    ThresholdBand band;
    bool majority_until_stable = true;
    MajorityRule majority_rule = MajorityRule::CenterInclusive;
    int thin_iters = 3;
};

struct PostprocResult {
    AveragedField normalized;
    BinaryEdgeMap thresholded;
    BinaryEdgeMap smoothed;
    BinaryEdgeMap thinned;

    const BinaryEdgeMap& edges() const noexcept { return thinned; }
};

/// normalize -> threshold -> majority -> thin.
PostprocResult postprocess_pipeline(const AveragedField& phi_bar, const PostprocOptions& options = {});

}  // namespace mrpi

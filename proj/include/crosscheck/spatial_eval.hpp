#pragma once

#include "crosscheck/formula.hpp"
#include "crosscheck/traffic.hpp"

namespace crosscheck::usl {

struct EvalConfig {
    double eps = 1e-9;
    // Extra meters added when size(ID) is resolved in a length constraint.
    // Default 0 keeps the plain "gap at least vehicle size" reading.
    double size_margin = 0.0;
};

// Satisfaction of `f` over `view` of `snap`.
//
// Free      -- the whole extent is free space (degenerate views are free)
// re(c)     -- the extent is exactly c's reservation on this lane, non-empty
// aut(c)=b  -- agent c exists and its automation flag equals b
// sign(k)   -- a sign of kind k lies within the extent on this lane
// crossing  -- a crossing span intersects the extent on this lane
// len ~ v   -- extent length compared against v (size(ID) resolved from snap)
// f ; g     -- some chop point m splits the extent into [lo,m] |= f, [m,hi] |= g
//
// Throws std::invalid_argument for views outside the network and for
// unresolvable agent references in re(..) or size(..).
bool evaluate(const traffic::Snapshot& snap, const traffic::View& view,
              const Formula& f, const EvalConfig& cfg = {});

// The finite split-point set the chop decision rests on: view endpoints,
// reservation/sign/crossing/intersection boundaries on the view's lane, each
// shifted by every sum of length thresholds appearing in the formula; clipped
// to the extent, deduplicated within cfg.eps, sorted. Atom truth over a
// sub-interval only changes when an endpoint crosses one of these points, so
// testing them (and the gaps between them) decides the chop exactly.
std::vector<double> candidate_chop_points(const traffic::Snapshot& snap,
                                          const traffic::View& view,
                                          const Formula& f,
                                          const EvalConfig& cfg = {});

}  // namespace crosscheck::usl

#pragma once

namespace lodecomp {

// Numerical cutoffs shared by every module. All are absolute and assume a
// unit-norm state.
struct Tolerances {
  double degeneracy = 1e-8;   // eigenvalue gap below which values cluster
  double support = 1e-10;     // eigenvalue / squared Schmidt coefficient cutoff
  double edge = 1e-10;        // squared joint-projection norm for a graph edge
  double min_weight = 1e-12;  // branch weights below this are exact zeros
};

}  // namespace lodecomp

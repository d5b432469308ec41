#pragma once

// Brute-force reference implementations for desk-scale validation. These
// build explicit full-space projectors and search exhaustively; they share
// only tensor-core primitives with the main construction.

#include <string>

#include "lodecomp/decomposition.hpp"
#include "lodecomp/state.hpp"
#include "lodecomp/tolerances.hpp"

namespace lodecomp::oracle {

/// Eigenvector-graph construction, transcribed literally with full-space
/// projectors and a depth-first component search. Refuses (throws
/// UnsupportedOperation) when any local support spectrum is degenerate.
BranchDecomposition maximal_nondegenerate(const StateTensor& state, const Tolerances& tol = {});

enum class Verdict { pass, fail, inconclusive };

std::string to_string(Verdict v);

struct MaximalityCheck {
  Verdict verdict = Verdict::inconclusive;
  std::string detail;
};

/// Searches every bipartition of every branch-local eigenbasis for a
/// locally orthogonal split of a branch. A found split is conclusive (fail);
/// without one the verdict is pass only if all branch-local spectra are
/// non-degenerate. Total dimension must be <= 256.
MaximalityCheck verify_maximality_small(const BranchDecomposition& d);

/// I (x) local (x) I on the full space.
Matrix embed_local(const Shape& shape, std::size_t n, const Matrix& local);

}  // namespace lodecomp::oracle

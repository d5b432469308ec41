#pragma once

// Construction of the maximal locally-orthogonal decomposition.
//
// N = 2: the Schmidt decomposition (one of possibly many maximal ones).
// N > 2, non-degenerate local spectra: connected components of the graph
//   whose nodes are local eigenvectors.
// N > 2, any degeneracy: each local support is first split into the finest
//   blocks that simultaneously block-diagonalize the pairwise correlation
//   family of that subsystem; the graph is then built over blocks and every
//   resulting branch is refined again until nothing splits.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "lodecomp/correlation_graph.hpp"
#include "lodecomp/decomposition.hpp"
#include "lodecomp/state.hpp"
#include "lodecomp/tolerances.hpp"

namespace lodecomp {

enum class ConstructionPath { schmidt, eigenvector_graph, block_refinement };

std::string_view to_string(ConstructionPath path);
std::optional<ConstructionPath> parse_construction_path(std::string_view name);

struct MaximalOptions {
  Tolerances tolerances;
  std::uint64_t seed = 0;
  int stable_rounds = 3;
  bool force_block_refinement = false;  // skip the eigenvector fast path
};

struct Diagnostics {
  ConstructionPath path = ConstructionPath::eigenvector_graph;
  Tolerances tolerances;
  std::uint64_t seed = 0;
  int stable_rounds = 3;
  bool degenerate_spectrum = false;  // some local support spectrum has a repeated value
  bool non_unique = false;           // N = 2 with repeated Schmidt coefficients
  double n_independence_residual = 0.0;  // max ||Q_i^(n)|psi> - sqrt(p_i)|psi_i>||
  double min_accepted_edge = 0.0;        // +inf when no edge was accepted
  double max_rejected_edge = 0.0;
  std::vector<std::size_t> sbd_rounds;  // per subsystem, top level only
  std::size_t refinement_splits = 0;    // branches split by the fixpoint pass
};

struct MaximalResult {
  BranchDecomposition decomposition;
  Diagnostics diagnostics;
};

/// Hermitian members spanning {Tr_m[rho^(n,m) (I (x) X)] : m != n, X any
/// operator on H^(m)}, as d_n x d_n matrices.
std::vector<Matrix> correlation_family(const StateTensor& state, std::size_t n);

struct SbdResult {
  SubspacePartition blocks;  // orthonormal, mutually orthogonal, spanning supp rho^(n)
  std::size_t rounds = 0;
};

/// Finest partition of the local support of subsystem n that keeps every
/// correlation family member block-diagonal. Randomized; deterministic for a
/// given seed. Requires N > 2.
SbdResult sbd_refine(const StateTensor& state, std::size_t n, const Tolerances& tol,
                     std::uint64_t seed, int stable_rounds = 3);

struct AssemblyResult {
  BranchDecomposition decomposition;
  CorrelationGraph graph;  // top-level graph
  double n_independence_residual = 0.0;
  std::size_t refinement_splits = 0;
};

/// Branches from the connected components of the block correlation graph.
/// With `refine`, every branch with a multi-dimensional support is
/// decomposed again on its own until no branch splits.
AssemblyResult assemble_branches(const StateTensor& state,
                                 const std::vector<SubspacePartition>& partitions,
                                 const MaximalOptions& options, bool refine = true);

/// max over i, n of ||Q_i^(n)|psi> - sqrt(p_i)|psi_i>||.
double n_independence_residual(const BranchDecomposition& d);

/// The maximal LO decomposition. Throws InternalConsistencyError when the
/// constructed result fails verification.
MaximalResult maximal_decomposition(const StateTensor& state, const MaximalOptions& options = {});

}  // namespace lodecomp

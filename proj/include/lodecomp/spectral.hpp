#pragma once

// Local eigensystems and Schmidt decompositions with explicit degeneracy
// reporting. Degeneracies are reported here, never resolved.

#include <cstddef>
#include <span>
#include <vector>

#include "lodecomp/state.hpp"
#include "lodecomp/tolerances.hpp"

namespace lodecomp {

using Clusters = std::vector<std::vector<std::size_t>>;

/// Eigensystem of the single-subsystem reduced density operator.
struct SpectralData {
  std::size_t subsystem = 0;
  std::vector<double> eigenvalues;  // descending
  Matrix eigenvectors;              // column mu pairs with eigenvalues[mu]
  Clusters clusters;                // degeneracy groups of eigenvalue indices
  std::size_t support_rank = 0;     // eigenvalues above the support cutoff

  /// True when two eigenvalues inside the support fall in one cluster.
  bool support_degenerate() const;
  /// Orthonormal basis of the support (the first support_rank eigenvectors).
  Matrix support_basis() const;
};

struct SchmidtDecomposition {
  std::vector<std::size_t> left;   // subsystems on the left of the cut
  std::vector<std::size_t> right;  // complement, ascending
  std::vector<double> coefficients;  // descending, zeros dropped
  Matrix left_vectors;               // columns over the left joint space
  Matrix right_vectors;              // columns over the right joint space
  bool degenerate = false;
};

/// Greedy gap clustering of a descending list: a new cluster opens whenever
/// the drop from the previous value exceeds t_deg.
Clusters cluster_eigenvalues(std::span<const double> values, double t_deg);

/// Multiplies each column by a phase so its largest-magnitude entry is
/// real and positive (first such entry on ties).
void fix_column_phases(Matrix& columns);

/// Descending eigensystem of a Hermitian matrix with phase-fixed vectors.
void hermitian_eigensystem(const Matrix& h, std::vector<double>& values, Matrix& vectors);

SpectralData local_spectrum(const Shape& shape, const Vector& amps, std::size_t n,
                            const Tolerances& tol = {});
SpectralData local_spectrum(const StateTensor& state, std::size_t n,
                            const Tolerances& tol = {});

SchmidtDecomposition schmidt_decompose(const StateTensor& state,
                                       std::span<const std::size_t> left,
                                       const Tolerances& tol = {});
SchmidtDecomposition schmidt_decompose(const StateTensor& state,
                                       std::initializer_list<std::size_t> left,
                                       const Tolerances& tol = {});

}  // namespace lodecomp

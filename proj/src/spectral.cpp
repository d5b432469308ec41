#include "lodecomp/spectral.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "lodecomp/errors.hpp"

namespace lodecomp {

namespace {

// Phase that rotates the largest-magnitude entry of `col` onto the positive
// real axis.
Complex canonical_phase(const Eigen::Ref<const Vector>& col) {
  Eigen::Index best = 0;
  double best_abs = -1.0;
  for (Eigen::Index k = 0; k < col.size(); ++k) {
    // Ties within rounding go to the first index so the choice is stable.
    const double a = std::abs(col(k));
    if (a > best_abs * (1.0 + 1e-12)) {
      best_abs = a;
      best = k;
    }
  }
  if (best_abs <= 0.0) return 1.0;
  return std::conj(col(best)) / best_abs;
}

}  // namespace

bool SpectralData::support_degenerate() const {
  for (const auto& cluster : clusters) {
    const auto in_support = std::count_if(cluster.begin(), cluster.end(),
                                          [&](std::size_t i) { return i < support_rank; });
    if (in_support > 1) return true;
  }
  return false;
}

Matrix SpectralData::support_basis() const {
  return eigenvectors.leftCols(static_cast<Eigen::Index>(support_rank));
}

Clusters cluster_eigenvalues(std::span<const double> values, double t_deg) {
  Clusters clusters;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i == 0 || values[i - 1] - values[i] > t_deg) clusters.emplace_back();
    clusters.back().push_back(i);
  }
  return clusters;
}

void fix_column_phases(Matrix& columns) {
  for (Eigen::Index c = 0; c < columns.cols(); ++c) {
    columns.col(c) *= canonical_phase(columns.col(c));
  }
}

void hermitian_eigensystem(const Matrix& h, std::vector<double>& values, Matrix& vectors) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw InternalConsistencyError("Hermitian eigensolver did not converge");
  }
  const Eigen::Index d = h.rows();
  values.resize(static_cast<std::size_t>(d));
  vectors.resize(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    values[static_cast<std::size_t>(k)] = solver.eigenvalues()(d - 1 - k);
    vectors.col(k) = solver.eigenvectors().col(d - 1 - k);
  }
  fix_column_phases(vectors);
}

SpectralData local_spectrum(const Shape& shape, const Vector& amps, std::size_t n,
                            const Tolerances& tol) {
  if (n >= shape.num_subsystems()) throw InvalidArgument("subsystem index out of range");
  const std::size_t keep[] = {n};
  SpectralData s;
  s.subsystem = n;
  hermitian_eigensystem(reduced_matrix(shape, amps, keep), s.eigenvalues, s.eigenvectors);
  s.clusters = cluster_eigenvalues(s.eigenvalues, tol.degeneracy);
  s.support_rank = static_cast<std::size_t>(
      std::count_if(s.eigenvalues.begin(), s.eigenvalues.end(),
                    [&](double v) { return v > tol.support; }));
  return s;
}

SpectralData local_spectrum(const StateTensor& state, std::size_t n, const Tolerances& tol) {
  return local_spectrum(state.shape(), state.amps(), n, tol);
}

SchmidtDecomposition schmidt_decompose(const StateTensor& state,
                                       std::span<const std::size_t> left,
                                       const Tolerances& tol) {
  const std::size_t N = state.num_subsystems();
  if (left.empty() || left.size() >= N) {
    throw InvalidArgument("Schmidt cut must be a nonempty strict subset of subsystems");
  }
  const Matrix m = unfold(state.shape(), state.amps(), left);  // validates indices

  SchmidtDecomposition out;
  out.left.assign(left.begin(), left.end());
  for (std::size_t n = 0; n < N; ++n) {
    if (std::find(left.begin(), left.end(), n) == left.end()) out.right.push_back(n);
  }

  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  Eigen::Index kept = 0;
  while (kept < sv.size() && sv(kept) * sv(kept) > tol.support) ++kept;

  out.left_vectors = svd.matrixU().leftCols(kept);
  // m = U S V^dagger, so the right Schmidt vectors are the conjugated columns of V.
  out.right_vectors = svd.matrixV().leftCols(kept).conjugate();
  for (Eigen::Index k = 0; k < kept; ++k) {
    const Complex phase = canonical_phase(out.left_vectors.col(k));
    out.left_vectors.col(k) *= phase;
    out.right_vectors.col(k) *= std::conj(phase);
    out.coefficients.push_back(sv(k));
  }

  std::vector<double> probs;
  for (double c : out.coefficients) probs.push_back(c * c);
  for (const auto& cluster : cluster_eigenvalues(probs, tol.degeneracy)) {
    if (cluster.size() > 1) out.degenerate = true;
  }
  return out;
}

SchmidtDecomposition schmidt_decompose(const StateTensor& state,
                                       std::initializer_list<std::size_t> left,
                                       const Tolerances& tol) {
  return schmidt_decompose(state, std::span<const std::size_t>(left.begin(), left.size()), tol);
}

}  // namespace lodecomp

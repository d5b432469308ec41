#pragma once

// Dense multipartite pure states and the primitive linear algebra on them.
//
// Amplitudes are stored row-major over the subsystem multi-index with
// subsystem 0 varying slowest:  I = sum_n i_n * stride_n.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace lodecomp {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

class Shape {
 public:
  Shape() = default;
  explicit Shape(std::vector<std::size_t> dims);

  std::size_t num_subsystems() const { return dims_.size(); }
  std::size_t dim(std::size_t n) const { return dims_.at(n); }
  std::size_t stride(std::size_t n) const { return strides_.at(n); }
  std::size_t total() const { return total_; }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t min_dim() const;

  std::vector<std::size_t> multi_index(std::size_t flat) const;
  std::size_t flat_index(std::span<const std::size_t> multi) const;

  /// Dimension of the joint space of the listed subsystems.
  std::size_t joint_dim(std::span<const std::size_t> subsystems) const;

  bool operator==(const Shape&) const = default;

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 0;
};

/// Normalized pure state on a tensor product space.
///
/// Construction validates the amplitude count and normalizes; a zero or
/// non-finite vector is rejected. Values are immutable.
class StateTensor {
 public:
  StateTensor(std::vector<std::size_t> dims, Vector amps);
  StateTensor(Shape shape, Vector amps);

  /// Computational basis product state |i_0 i_1 ...>.
  static StateTensor basis(std::vector<std::size_t> dims,
                           std::span<const std::size_t> index);

  const Shape& shape() const { return shape_; }
  const std::vector<std::size_t>& dims() const { return shape_.dims(); }
  std::size_t num_subsystems() const { return shape_.num_subsystems(); }
  std::size_t dim(std::size_t n) const { return shape_.dim(n); }
  const Vector& amps() const { return amps_; }
  Complex amp(std::size_t flat) const { return amps_(static_cast<Eigen::Index>(flat)); }

 private:
  Shape shape_;
  Vector amps_;
};

struct DensityOperator {
  std::vector<std::size_t> subsystems;  // retained subsystems, in row order
  Matrix matrix;
};

/// Projector onto span(basis) acting on one subsystem, identity elsewhere.
class LocalProjector {
 public:
  LocalProjector(std::size_t subsystem, Matrix basis);

  /// Rank-one projector onto a single (normalized) vector.
  static LocalProjector onto(std::size_t subsystem, const Vector& v);
  /// Projector onto computational basis state |k>.
  static LocalProjector computational(std::size_t subsystem, std::size_t dim,
                                      std::size_t k);

  std::size_t subsystem() const { return subsystem_; }
  const Matrix& basis() const { return basis_; }
  Matrix matrix() const { return basis_ * basis_.adjoint(); }

 private:
  std::size_t subsystem_;
  Matrix basis_;
};

struct ProjectedState {
  Vector vector;  // not renormalized
  double weight;  // squared norm of vector
};

// Reshapes amps into a matrix whose rows run over the multi-index of `rows`
// (in the given order) and whose columns run over the remaining subsystems
// (ascending, row-major).
Matrix unfold(const Shape& shape, const Vector& amps,
              std::span<const std::size_t> rows);
Vector fold(const Shape& shape, const Matrix& m,
            std::span<const std::size_t> rows);

/// Reduced density operator on `keep`, for a possibly unnormalized vector.
Matrix reduced_matrix(const Shape& shape, const Vector& amps,
                      std::span<const std::size_t> keep);

/// Traces out every subsystem not in `keep`. `keep` must be a nonempty
/// strict subset; its order fixes the row ordering of the result.
DensityOperator partial_trace(const StateTensor& state,
                              std::span<const std::size_t> keep);
DensityOperator partial_trace(const StateTensor& state,
                              std::initializer_list<std::size_t> keep);

/// Applies an arbitrary d_n x d_n operator to subsystem n.
Vector apply_local_operator(const Shape& shape, const Vector& amps,
                            std::size_t n, const Matrix& op);
/// Applies a (d_n d_m) x (d_n d_m) operator to the ordered pair (n, m);
/// the pair index is i_n * d_m + i_m.
Vector apply_pair_operator(const Shape& shape, const Vector& amps,
                           std::size_t n, std::size_t m, const Matrix& op);

Vector project(const Shape& shape, const Vector& amps,
               const LocalProjector& proj);
ProjectedState apply_local_projector(const StateTensor& state,
                                     const LocalProjector& proj);

/// ||P Q |psi>||^2 for projectors on distinct subsystems.
double joint_projection_norm(const StateTensor& state, const LocalProjector& p,
                             const LocalProjector& q);

Complex inner_product(const Shape& a_shape, const Vector& a,
                      const Shape& b_shape, const Vector& b);
Complex inner_product(const StateTensor& a, const StateTensor& b);

/// a (x) b on the concatenated subsystem list.
StateTensor tensor_compose(const StateTensor& a, const StateTensor& b);

/// New state whose subsystem j is subsystem perm[j] of the input.
StateTensor permute_subsystems(const StateTensor& state,
                               std::span<const std::size_t> perm);

}  // namespace lodecomp

#include "lodecomp/state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "lodecomp/errors.hpp"

namespace lodecomp {

namespace {

void check_subsystem_list(const Shape& shape, std::span<const std::size_t> subs) {
  std::vector<bool> seen(shape.num_subsystems(), false);
  for (std::size_t n : subs) {
    if (n >= shape.num_subsystems()) {
      throw InvalidArgument("subsystem index " + std::to_string(n) +
                            " out of range for " +
                            std::to_string(shape.num_subsystems()) + " subsystems");
    }
    if (seen[n]) {
      throw InvalidArgument("subsystem " + std::to_string(n) + " listed twice");
    }
    seen[n] = true;
  }
}

// Row / column position of every flat amplitude index under an unfolding.
struct Unfolding {
  std::vector<std::size_t> row_of;
  std::vector<std::size_t> col_of;
  std::size_t rows = 1;
  std::size_t cols = 1;
};

Unfolding make_unfolding(const Shape& shape, std::span<const std::size_t> rows) {
  check_subsystem_list(shape, rows);
  const std::size_t N = shape.num_subsystems();
  std::vector<bool> is_row(N, false);
  for (std::size_t n : rows) is_row[n] = true;

  std::vector<std::size_t> rstride(N, 0), cstride(N, 0);
  Unfolding u;
  std::size_t acc = 1;
  for (std::size_t k = rows.size(); k-- > 0;) {
    rstride[rows[k]] = acc;
    acc *= shape.dim(rows[k]);
  }
  u.rows = acc;
  acc = 1;
  for (std::size_t n = N; n-- > 0;) {
    if (is_row[n]) continue;
    cstride[n] = acc;
    acc *= shape.dim(n);
  }
  u.cols = acc;

  u.row_of.resize(shape.total());
  u.col_of.resize(shape.total());
  std::vector<std::size_t> idx(N, 0);
  std::size_t r = 0, c = 0;
  for (std::size_t flat = 0; flat < shape.total(); ++flat) {
    u.row_of[flat] = r;
    u.col_of[flat] = c;
    for (std::size_t n = N; n-- > 0;) {
      ++idx[n];
      r += rstride[n];
      c += cstride[n];
      if (idx[n] < shape.dim(n)) break;
      r -= rstride[n] * shape.dim(n);
      c -= cstride[n] * shape.dim(n);
      idx[n] = 0;
    }
  }
  return u;
}

void check_vector(const Shape& shape, const Vector& amps) {
  if (static_cast<std::size_t>(amps.size()) != shape.total()) {
    throw InvalidArgument("amplitude count " + std::to_string(amps.size()) +
                          " does not match product of dims " +
                          std::to_string(shape.total()));
  }
}

using RowMajorMap =
    Eigen::Map<Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using ConstRowMajorMap =
    Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

}  // namespace

Shape::Shape(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw InvalidArgument("a shape needs at least one subsystem");
  strides_.assign(dims_.size(), 1);
  total_ = 1;
  for (std::size_t n = dims_.size(); n-- > 0;) {
    if (dims_[n] == 0) throw InvalidArgument("subsystem dimensions must be >= 1");
    strides_[n] = total_;
    total_ *= dims_[n];
  }
}

std::size_t Shape::min_dim() const {
  return *std::min_element(dims_.begin(), dims_.end());
}

std::vector<std::size_t> Shape::multi_index(std::size_t flat) const {
  if (flat >= total_) throw InvalidArgument("flat index out of range");
  std::vector<std::size_t> multi(dims_.size());
  for (std::size_t n = 0; n < dims_.size(); ++n) {
    multi[n] = flat / strides_[n];
    flat %= strides_[n];
  }
  return multi;
}

std::size_t Shape::flat_index(std::span<const std::size_t> multi) const {
  if (multi.size() != dims_.size()) throw InvalidArgument("multi-index has wrong length");
  std::size_t flat = 0;
  for (std::size_t n = 0; n < dims_.size(); ++n) {
    if (multi[n] >= dims_[n]) throw InvalidArgument("multi-index component out of range");
    flat += multi[n] * strides_[n];
  }
  return flat;
}

std::size_t Shape::joint_dim(std::span<const std::size_t> subsystems) const {
  std::size_t d = 1;
  for (std::size_t n : subsystems) d *= dim(n);
  return d;
}

StateTensor::StateTensor(std::vector<std::size_t> dims, Vector amps)
    : StateTensor(Shape(std::move(dims)), std::move(amps)) {}

StateTensor::StateTensor(Shape shape, Vector amps)
    : shape_(std::move(shape)), amps_(std::move(amps)) {
  check_vector(shape_, amps_);
  const double norm = amps_.norm();
  if (!std::isfinite(norm)) throw InvalidArgument("state has non-finite amplitudes");
  if (norm == 0.0) throw InvalidArgument("cannot normalize a zero state");
  // Already-normalized input is kept bit-for-bit so file round-trips are exact.
  if (std::abs(norm - 1.0) > 4 * std::numeric_limits<double>::epsilon()) amps_ /= norm;
}

StateTensor StateTensor::basis(std::vector<std::size_t> dims,
                               std::span<const std::size_t> index) {
  Shape shape(std::move(dims));
  Vector amps = Vector::Zero(static_cast<Eigen::Index>(shape.total()));
  amps(static_cast<Eigen::Index>(shape.flat_index(index))) = 1.0;
  return StateTensor(std::move(shape), std::move(amps));
}

LocalProjector::LocalProjector(std::size_t subsystem, Matrix basis)
    : subsystem_(subsystem), basis_(std::move(basis)) {
  if (basis_.cols() == 0 || basis_.cols() > basis_.rows()) {
    throw InvalidArgument("projector basis must have between 1 and dim columns");
  }
  const Matrix gram = basis_.adjoint() * basis_;
  const double err = (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  if (err > 1e-10) {
    throw InvalidArgument("projector basis columns are not orthonormal (error " +
                          std::to_string(err) + ")");
  }
}

LocalProjector LocalProjector::onto(std::size_t subsystem, const Vector& v) {
  return LocalProjector(subsystem, Matrix(v.normalized()));
}

LocalProjector LocalProjector::computational(std::size_t subsystem, std::size_t dim,
                                             std::size_t k) {
  if (k >= dim) throw InvalidArgument("basis index out of range");
  Matrix b = Matrix::Zero(static_cast<Eigen::Index>(dim), 1);
  b(static_cast<Eigen::Index>(k), 0) = 1.0;
  return LocalProjector(subsystem, std::move(b));
}

Matrix unfold(const Shape& shape, const Vector& amps, std::span<const std::size_t> rows) {
  check_vector(shape, amps);
  const Unfolding u = make_unfolding(shape, rows);
  Matrix m(static_cast<Eigen::Index>(u.rows), static_cast<Eigen::Index>(u.cols));
  for (std::size_t flat = 0; flat < shape.total(); ++flat) {
    m(static_cast<Eigen::Index>(u.row_of[flat]), static_cast<Eigen::Index>(u.col_of[flat])) =
        amps(static_cast<Eigen::Index>(flat));
  }
  return m;
}

Vector fold(const Shape& shape, const Matrix& m, std::span<const std::size_t> rows) {
  const Unfolding u = make_unfolding(shape, rows);
  if (static_cast<std::size_t>(m.rows()) != u.rows ||
      static_cast<std::size_t>(m.cols()) != u.cols) {
    throw InvalidArgument("matrix shape does not match the unfolding");
  }
  Vector amps(static_cast<Eigen::Index>(shape.total()));
  for (std::size_t flat = 0; flat < shape.total(); ++flat) {
    amps(static_cast<Eigen::Index>(flat)) =
        m(static_cast<Eigen::Index>(u.row_of[flat]), static_cast<Eigen::Index>(u.col_of[flat]));
  }
  return amps;
}

Matrix reduced_matrix(const Shape& shape, const Vector& amps,
                      std::span<const std::size_t> keep) {
  const Matrix m = unfold(shape, amps, keep);
  Matrix rho = m * m.adjoint();
  // Exact Hermiticity; the product is Hermitian only up to rounding.
  return (0.5 * (rho + rho.adjoint())).eval();
}

DensityOperator partial_trace(const StateTensor& state, std::span<const std::size_t> keep) {
  if (keep.empty() || keep.size() >= state.num_subsystems()) {
    throw InvalidArgument("partial_trace needs a nonempty strict subset of subsystems");
  }
  return DensityOperator{std::vector<std::size_t>(keep.begin(), keep.end()),
                         reduced_matrix(state.shape(), state.amps(), keep)};
}

DensityOperator partial_trace(const StateTensor& state,
                              std::initializer_list<std::size_t> keep) {
  return partial_trace(state, std::span<const std::size_t>(keep.begin(), keep.size()));
}

Vector apply_local_operator(const Shape& shape, const Vector& amps, std::size_t n,
                            const Matrix& op) {
  check_vector(shape, amps);
  if (n >= shape.num_subsystems()) throw InvalidArgument("subsystem index out of range");
  const auto d = static_cast<Eigen::Index>(shape.dim(n));
  if (op.rows() != d || op.cols() != d) {
    throw InvalidArgument("operator size does not match subsystem dimension");
  }
  const auto right = static_cast<Eigen::Index>(shape.stride(n));
  const auto left = static_cast<Eigen::Index>(shape.total()) / (d * right);
  Vector out(amps.size());
  for (Eigen::Index l = 0; l < left; ++l) {
    ConstRowMajorMap in_block(amps.data() + l * d * right, d, right);
    RowMajorMap out_block(out.data() + l * d * right, d, right);
    out_block.noalias() = op * in_block;
  }
  return out;
}

Vector apply_pair_operator(const Shape& shape, const Vector& amps, std::size_t n,
                           std::size_t m, const Matrix& op) {
  if (n == m) throw InvalidArgument("pair operator needs two distinct subsystems");
  const std::size_t rows[] = {n, m};
  const Matrix unfolded = unfold(shape, amps, rows);
  if (op.rows() != unfolded.rows() || op.cols() != unfolded.rows()) {
    throw InvalidArgument("pair operator size does not match d_n * d_m");
  }
  return fold(shape, op * unfolded, rows);
}

Vector project(const Shape& shape, const Vector& amps, const LocalProjector& proj) {
  if (proj.subsystem() >= shape.num_subsystems()) {
    throw InvalidArgument("projector subsystem out of range");
  }
  if (static_cast<std::size_t>(proj.basis().rows()) != shape.dim(proj.subsystem())) {
    throw InvalidArgument("projector dimension does not match subsystem dimension");
  }
  return apply_local_operator(shape, amps, proj.subsystem(), proj.matrix());
}

ProjectedState apply_local_projector(const StateTensor& state, const LocalProjector& proj) {
  Vector v = project(state.shape(), state.amps(), proj);
  const double w = v.squaredNorm();
  return {std::move(v), w};
}

double joint_projection_norm(const StateTensor& state, const LocalProjector& p,
                             const LocalProjector& q) {
  if (p.subsystem() == q.subsystem()) {
    throw InvalidArgument("joint_projection_norm needs projectors on distinct subsystems");
  }
  const Vector v = project(state.shape(), state.amps(), p);
  return project(state.shape(), v, q).squaredNorm();
}

Complex inner_product(const Shape& a_shape, const Vector& a, const Shape& b_shape,
                      const Vector& b) {
  if (!(a_shape == b_shape)) throw InvalidArgument("inner_product: shape mismatch");
  check_vector(a_shape, a);
  check_vector(b_shape, b);
  return a.dot(b);  // conjugates the first argument
}

Complex inner_product(const StateTensor& a, const StateTensor& b) {
  return inner_product(a.shape(), a.amps(), b.shape(), b.amps());
}

StateTensor tensor_compose(const StateTensor& a, const StateTensor& b) {
  std::vector<std::size_t> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  const Eigen::Index db = b.amps().size();
  Vector amps(a.amps().size() * db);
  for (Eigen::Index i = 0; i < a.amps().size(); ++i) {
    amps.segment(i * db, db) = a.amps()(i) * b.amps();
  }
  return StateTensor(std::move(dims), std::move(amps));
}

StateTensor permute_subsystems(const StateTensor& state, std::span<const std::size_t> perm) {
  if (perm.size() != state.num_subsystems()) {
    throw InvalidArgument("permutation length does not match subsystem count");
  }
  std::vector<std::size_t> dims(perm.size());
  for (std::size_t j = 0; j < perm.size(); ++j) {
    if (perm[j] >= perm.size()) throw InvalidArgument("permutation entry out of range");
    dims[j] = state.dim(perm[j]);
  }
  // All subsystems as rows in permuted order: the single column is the
  // amplitude vector in the new layout.
  Matrix column = unfold(state.shape(), state.amps(), perm);
  return StateTensor(std::move(dims), Vector(column.col(0)));
}

}  // namespace lodecomp

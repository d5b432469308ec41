#include "lodecomp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "lodecomp/errors.hpp"

namespace lodecomp::oracle {

namespace {

constexpr std::size_t kMaxTotalDim = 256;
constexpr double kDegenerateGap = 1e-8;
constexpr double kSplitTol = 1e-9;

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

struct LocalEigen {
  std::vector<double> values;  // support only, descending
  Matrix vectors;              // matching columns
  bool degenerate = false;
};

LocalEigen support_eigen(const Matrix& rho, double t_supp) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
  LocalEigen out;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = rho.rows(); k-- > 0;) {
    if (es.eigenvalues()(k) > t_supp) keep.push_back(k);
  }
  out.vectors.resize(rho.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    out.values.push_back(es.eigenvalues()(keep[c]));
    out.vectors.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(keep[c]);
  }
  for (std::size_t c = 1; c < out.values.size(); ++c) {
    if (out.values[c - 1] - out.values[c] <= kDegenerateGap) out.degenerate = true;
  }
  return out;
}

Matrix reduced(const Shape& shape, const Vector& v, std::size_t n) {
  const std::size_t keep[] = {n};
  return reduced_matrix(shape, v, keep);
}

// Both parts nonzero and, on every subsystem, with orthogonal local supports.
bool is_lo_split(const Shape& shape, const Vector& a, const Vector& b) {
  if (a.squaredNorm() < 1e-12 || b.squaredNorm() < 1e-12) return false;
  for (std::size_t m = 0; m < shape.num_subsystems(); ++m) {
    if ((reduced(shape, a, m) * reduced(shape, b, m)).norm() > kSplitTol) return false;
  }
  return true;
}

// Conditional operators <a|_m rho^(n,m) |a>_m, one per m != n and basis a.
std::vector<Matrix> probe_operators(const Shape& shape, const Vector& v, std::size_t n) {
  std::vector<Matrix> out;
  const auto dn = static_cast<Eigen::Index>(shape.dim(n));
  for (std::size_t m = 0; m < shape.num_subsystems(); ++m) {
    if (m == n) continue;
    const std::size_t keep[] = {n, m};
    const Matrix rho = reduced_matrix(shape, v, keep);
    const auto dm = static_cast<Eigen::Index>(shape.dim(m));
    for (Eigen::Index a = 0; a < dm; ++a) {
      Matrix p(dn, dn);
      for (Eigen::Index x = 0; x < dn; ++x) {
        for (Eigen::Index y = 0; y < dn; ++y) p(x, y) = rho(x * dm + a, y * dm + a);
      }
      out.push_back(p);
    }
  }
  return out;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

Matrix embed_local(const Shape& shape, std::size_t n, const Matrix& local) {
  Matrix out = Matrix::Identity(1, 1);
  for (std::size_t j = 0; j < shape.num_subsystems(); ++j) {
    const auto d = static_cast<Eigen::Index>(shape.dim(j));
    out = kron(out, j == n ? local : Matrix(Matrix::Identity(d, d)));
  }
  return out;
}

BranchDecomposition maximal_nondegenerate(const StateTensor& state, const Tolerances& tol) {
  const Shape& shape = state.shape();
  const std::size_t N = shape.num_subsystems();
  if (N < 2) throw InvalidArgument("oracle needs at least two subsystems");

  struct Node {
    std::size_t subsystem;
    Vector vec;
    Matrix projector;  // full space
  };
  std::vector<Node> nodes;
  for (std::size_t n = 0; n < N; ++n) {
    const LocalEigen le = support_eigen(partial_trace(state, {n}).matrix, tol.support);
    if (le.degenerate) {
      throw UnsupportedOperation("oracle: local spectrum of subsystem " + std::to_string(n) +
                                 " is degenerate");
    }
    for (Eigen::Index c = 0; c < le.vectors.cols(); ++c) {
      const Vector v = le.vectors.col(c);
      nodes.push_back({n, v, embed_local(shape, n, v * v.adjoint())});
    }
  }

  const std::size_t V = nodes.size();
  std::vector<std::vector<std::size_t>> adj(V);
  for (std::size_t a = 0; a < V; ++a) {
    for (std::size_t b = 0; b < V; ++b) {
      if (nodes[a].subsystem == nodes[b].subsystem) continue;
      if ((nodes[a].projector * nodes[b].projector * state.amps()).squaredNorm() > tol.edge) {
        adj[a].push_back(b);
      }
    }
  }

  std::vector<int> label(V, -1);
  int count = 0;
  for (std::size_t s = 0; s < V; ++s) {
    if (label[s] >= 0) continue;
    std::vector<std::size_t> stack{s};
    label[s] = count;
    while (!stack.empty()) {
      const std::size_t a = stack.back();
      stack.pop_back();
      for (std::size_t b : adj[a]) {
        if (label[b] < 0) {
          label[b] = count;
          stack.push_back(b);
        }
      }
    }
    ++count;
  }

  const auto D = static_cast<Eigen::Index>(shape.total());
  std::vector<Branch> branches;
  for (int c = 0; c < count; ++c) {
    Branch b;
    Matrix q0 = Matrix::Zero(D, D);
    for (std::size_t n = 0; n < N; ++n) {
      std::vector<Vector> cols;
      for (std::size_t a = 0; a < V; ++a) {
        if (label[a] == c && nodes[a].subsystem == n) {
          cols.push_back(nodes[a].vec);
          if (n == 0) q0 += nodes[a].projector;
        }
      }
      Matrix basis(static_cast<Eigen::Index>(shape.dim(n)), static_cast<Eigen::Index>(cols.size()));
      for (std::size_t k = 0; k < cols.size(); ++k) basis.col(static_cast<Eigen::Index>(k)) = cols[k];
      b.supports.push_back(basis);
    }
    const Vector comp = q0 * state.amps();
    b.weight = comp.squaredNorm();
    if (b.weight <= tol.min_weight) continue;
    b.vector = comp / std::sqrt(b.weight);
    branches.push_back(std::move(b));
  }
  std::stable_sort(branches.begin(), branches.end(),
                   [](const Branch& x, const Branch& y) { return x.weight > y.weight; });
  return BranchDecomposition(state, std::move(branches));
}

MaximalityCheck verify_maximality_small(const BranchDecomposition& d) {
  const Shape& shape = d.shape();
  if (shape.total() > kMaxTotalDim) {
    throw InvalidArgument("maximality oracle limited to total dimension <= 256");
  }
  bool any_degenerate = false;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const Vector& psi = d.branch(i).vector;
    for (std::size_t n = 0; n < shape.num_subsystems(); ++n) {
      const LocalEigen le = support_eigen(reduced(shape, psi, n), 1e-10);
      const auto r = le.vectors.cols();
      if (r < 2) continue;
      std::vector<Matrix> bases{le.vectors};
      if (le.degenerate) {
        any_degenerate = true;
        for (const Matrix& p : probe_operators(shape, psi, n)) {
          Eigen::SelfAdjointEigenSolver<Matrix> es(le.vectors.adjoint() * p * le.vectors);
          bases.push_back(le.vectors * es.eigenvectors());
        }
      }
      for (const Matrix& basis : bases) {
        // The last vector always stays on the complement side.
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << (r - 1)); ++mask) {
          Matrix local = Matrix::Zero(basis.rows(), basis.rows());
          for (Eigen::Index c = 0; c < r - 1; ++c) {
            if (mask & (std::uint64_t{1} << c)) local += basis.col(c) * basis.col(c).adjoint();
          }
          const Vector a = embed_local(shape, n, local) * psi;
          if (is_lo_split(shape, a, psi - a)) {
            std::ostringstream os;
            os << "branch " << i << " splits on subsystem " << n;
            return {Verdict::fail, os.str()};
          }
        }
      }
    }
  }
  if (any_degenerate) {
    return {Verdict::inconclusive, "degenerate branch-local spectrum; no split found"};
  }
  return {Verdict::pass, "no locally orthogonal split of any branch"};
}

}  // namespace lodecomp::oracle

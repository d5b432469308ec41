#include "lodecomp/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "lodecomp/errors.hpp"
#include "lodecomp/spectral.hpp"

namespace lodecomp {

namespace {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Vector component(const Branch& b) { return std::sqrt(b.weight) * b.vector; }

// Lowest computational index with non-negligible weight in each support,
// subsystem by subsystem.
std::vector<std::size_t> support_key(const Branch& b) {
  std::vector<std::size_t> key;
  for (const Matrix& basis : b.supports) {
    std::size_t first = static_cast<std::size_t>(basis.rows());
    for (Eigen::Index r = 0; r < basis.rows(); ++r) {
      if (basis.row(r).squaredNorm() > 1e-8) {
        first = static_cast<std::size_t>(r);
        break;
      }
    }
    key.push_back(first);
  }
  return key;
}

// Q_i = Q_i^(0) ... Q_i^(N-1) applied to v.
Vector apply_branch_projector(const Shape& shape, const Branch& b, Vector v) {
  for (std::size_t n = 0; n < shape.num_subsystems(); ++n) {
    v = apply_local_operator(shape, v, n, b.supports[n] * b.supports[n].adjoint());
  }
  return v;
}

void require_lo(const BranchDecomposition& d, const char* which) {
  const VerificationReport report = verify_lo(d);
  if (!report.passed) {
    throw InvalidArgument(std::string(which) + " is not a locally orthogonal decomposition:\n" +
                          report.render());
  }
}

}  // namespace

BranchDecomposition::BranchDecomposition(StateTensor state, std::vector<Branch> branches)
    : state_(std::move(state)), branches_(std::move(branches)) {
  if (branches_.empty()) throw InvalidArgument("a decomposition needs at least one branch");
  const Shape& shape = state_.shape();
  for (const Branch& b : branches_) {
    if (static_cast<std::size_t>(b.vector.size()) != shape.total()) {
      throw InvalidArgument("branch vector length does not match the state");
    }
    if (b.supports.size() != shape.num_subsystems()) {
      throw InvalidArgument("branch needs one support basis per subsystem");
    }
    for (std::size_t n = 0; n < shape.num_subsystems(); ++n) {
      if (static_cast<std::size_t>(b.supports[n].rows()) != shape.dim(n)) {
        throw InvalidArgument("support basis row count does not match subsystem dimension");
      }
    }
    if (!std::isfinite(b.weight)) throw InvalidArgument("branch weight is not finite");
  }
}

std::vector<double> BranchDecomposition::weights() const {
  std::vector<double> w;
  for (const Branch& b : branches_) w.push_back(b.weight);
  return w;
}

Matrix BranchDecomposition::support_projector(std::size_t i, std::size_t n) const {
  const Matrix& basis = branches_.at(i).supports.at(n);
  return basis * basis.adjoint();
}

const VerificationCheck* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::string VerificationReport::render() const {
  std::ostringstream os;
  os << std::scientific << std::setprecision(3);
  for (const auto& c : checks) {
    os << (c.passed ? "  ok    " : "  FAIL  ") << std::left << std::setw(24) << c.name
       << " residual " << c.residual << "  (tol " << c.tolerance << ")\n";
  }
  return os.str();
}

VerificationReport verify_lo(const BranchDecomposition& d, double tol) {
  const Shape& shape = d.shape();
  const auto& branches = d.branches();
  const std::size_t K = branches.size();
  const std::size_t N = shape.num_subsystems();
  VerificationReport report;
  auto add = [&](std::string name, double residual, double tolerance) {
    const bool ok = std::isfinite(residual) && residual <= tolerance;
    report.checks.push_back({std::move(name), residual, tolerance, ok});
    report.passed = report.passed && ok;
  };

  double min_weight = 1.0;
  double sum = 0.0;
  for (const Branch& b : branches) {
    min_weight = std::min(min_weight, b.weight);
    sum += b.weight;
  }
  add("weights_positive", std::max(0.0, Tolerances{}.min_weight - min_weight), 0.0);
  add("weight_sum", std::abs(sum - 1.0), tol);

  double ortho = 0.0;
  for (std::size_t i = 0; i < K; ++i) {
    for (std::size_t j = i; j < K; ++j) {
      const Complex g = branches[i].vector.dot(branches[j].vector);
      ortho = std::max(ortho, std::abs(g - (i == j ? Complex(1.0) : Complex(0.0))));
    }
  }
  add("branch_orthonormality", ortho, tol);

  Vector sum_vec = Vector::Zero(static_cast<Eigen::Index>(shape.total()));
  for (const Branch& b : branches) sum_vec += component(b);
  add("reconstruction", (sum_vec - d.state().amps()).norm(), tol);

  double basis_err = 0.0;
  double cross = 0.0;
  for (std::size_t n = 0; n < N; ++n) {
    for (std::size_t i = 0; i < K; ++i) {
      const Matrix& bi = branches[i].supports[n];
      if (bi.cols() == 0) {
        basis_err = std::max(basis_err, 1.0);
        continue;
      }
      basis_err = std::max(basis_err,
                           max_abs(bi.adjoint() * bi - Matrix::Identity(bi.cols(), bi.cols())));
      for (std::size_t j = i + 1; j < K; ++j) {
        cross = std::max(cross, max_abs(bi.adjoint() * branches[j].supports[n]));
      }
    }
  }
  add("support_orthonormality", basis_err, tol);
  add("local_orthogonality", cross, tol);

  // Q_i^(n) Q_j^(m) |psi> = delta_ij sqrt(p_i) |psi_i> for all n, m, i, j.
  std::vector<std::vector<Vector>> single(K, std::vector<Vector>(N));
  for (std::size_t j = 0; j < K; ++j) {
    for (std::size_t m = 0; m < N; ++m) {
      single[j][m] = apply_local_operator(shape, d.state().amps(), m, d.support_projector(j, m));
    }
  }
  double identity_err = 0.0;
  for (std::size_t i = 0; i < K; ++i) {
    const Vector target = component(branches[i]);
    for (std::size_t n = 0; n < N; ++n) {
      const Matrix qi = d.support_projector(i, n);
      for (std::size_t j = 0; j < K; ++j) {
        for (std::size_t m = 0; m < N; ++m) {
          const Vector v = apply_local_operator(shape, single[j][m], n, qi);
          const double r = i == j ? (v - target).norm() : v.norm();
          identity_err = std::max(identity_err, r);
        }
      }
    }
  }
  add("projector_identity", identity_err, tol);

  const double excess =
      K > shape.min_dim() ? static_cast<double>(K - shape.min_dim()) : 0.0;
  add("branch_count", excess, 0.0);
  return report;
}

Branch make_branch(const Shape& shape, const Vector& comp, const Tolerances& tol) {
  Branch b;
  b.weight = comp.squaredNorm();
  if (!(b.weight > 0.0)) throw InvalidArgument("cannot build a branch from a zero component");
  b.vector = comp / std::sqrt(b.weight);
  for (std::size_t n = 0; n < shape.num_subsystems(); ++n) {
    b.supports.push_back(local_spectrum(shape, b.vector, n, tol).support_basis());
  }
  return b;
}

void sort_branches(std::vector<Branch>& branches) {
  std::stable_sort(branches.begin(), branches.end(),
                   [](const Branch& a, const Branch& b) { return a.weight > b.weight; });
  std::size_t start = 0;
  while (start < branches.size()) {
    std::size_t end = start + 1;
    while (end < branches.size() && branches[end - 1].weight - branches[end].weight <= 1e-9) {
      ++end;
    }
    std::stable_sort(branches.begin() + static_cast<std::ptrdiff_t>(start),
                     branches.begin() + static_cast<std::ptrdiff_t>(end),
                     [](const Branch& a, const Branch& b) {
                       return support_key(a) < support_key(b);
                     });
    start = end;
  }
}

BranchDecomposition coarse_grain(const BranchDecomposition& d,
                                 const std::vector<std::vector<std::size_t>>& merge) {
  const std::size_t K = d.size();
  std::vector<int> seen(K, 0);
  for (const auto& cls : merge) {
    if (cls.empty()) throw InvalidArgument("merge partition has an empty class");
    for (std::size_t i : cls) {
      if (i >= K) throw InvalidArgument("merge partition references a missing branch");
      if (seen[i]++) throw InvalidArgument("merge partition lists a branch twice");
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw InvalidArgument("merge partition does not cover every branch");
  }

  const std::size_t N = d.shape().num_subsystems();
  std::vector<Branch> merged;
  for (const auto& cls : merge) {
    Vector comp = Vector::Zero(static_cast<Eigen::Index>(d.shape().total()));
    std::vector<Matrix> supports(N);
    for (std::size_t n = 0; n < N; ++n) {
      Eigen::Index cols = 0;
      for (std::size_t i : cls) cols += d.branch(i).supports[n].cols();
      supports[n].resize(static_cast<Eigen::Index>(d.shape().dim(n)), cols);
      Eigen::Index at = 0;
      for (std::size_t i : cls) {
        const Matrix& s = d.branch(i).supports[n];
        supports[n].middleCols(at, s.cols()) = s;
        at += s.cols();
      }
    }
    for (std::size_t i : cls) comp += component(d.branch(i));
    Branch b;
    b.weight = comp.squaredNorm();
    b.vector = comp / std::sqrt(b.weight);
    b.supports = std::move(supports);
    merged.push_back(std::move(b));
  }
  return BranchDecomposition(d.state(), std::move(merged));
}

double fine_graining_route_gap(const BranchDecomposition& d1, const BranchDecomposition& d2) {
  const Shape& shape = d1.shape();
  double gap = 0.0;
  for (const Branch& tk : d2.branches()) {
    for (const Branch& bi : d1.branches()) {
      const Vector a = apply_branch_projector(shape, bi, component(tk));
      const Vector b = apply_branch_projector(shape, tk, component(bi));
      gap = std::max(gap, (a - b).norm());
    }
  }
  return gap;
}

BranchDecomposition common_fine_graining(const BranchDecomposition& d1,
                                         const BranchDecomposition& d2, const Tolerances& tol,
                                         double route_tol) {
  if (!(d1.shape() == d2.shape()) ||
      (d1.state().amps() - d2.state().amps()).norm() > 1e-9) {
    throw InvalidArgument("common_fine_graining: decompositions are of different states");
  }
  if (d1.shape().num_subsystems() <= 2) {
    throw UnsupportedOperation("common fine-graining is only guaranteed for N > 2 subsystems");
  }
  require_lo(d1, "first decomposition");
  require_lo(d2, "second decomposition");

  const Shape& shape = d1.shape();
  std::vector<Branch> out;
  double gap = 0.0;
  for (const Branch& tk : d2.branches()) {
    for (const Branch& bi : d1.branches()) {
      const Vector a = apply_branch_projector(shape, bi, component(tk));
      const Vector b = apply_branch_projector(shape, tk, component(bi));
      gap = std::max(gap, (a - b).norm());
      if (a.squaredNorm() > tol.min_weight) out.push_back(make_branch(shape, a, tol));
    }
  }
  if (gap > route_tol) {
    std::ostringstream os;
    os << "fine-graining routes disagree by " << gap;
    throw InternalConsistencyError(os.str());
  }
  sort_branches(out);
  return BranchDecomposition(d1.state(), std::move(out));
}

std::optional<std::vector<std::size_t>> coarse_graining_map(const BranchDecomposition& fine,
                                                            const BranchDecomposition& coarse,
                                                            double tol) {
  if (!(fine.shape() == coarse.shape()) ||
      (fine.state().amps() - coarse.state().amps()).norm() > tol) {
    return std::nullopt;
  }
  const Shape& shape = fine.shape();
  std::vector<std::size_t> map;
  for (const Branch& f : fine.branches()) {
    std::size_t best = 0;
    double best_mass = -1.0;
    for (std::size_t k = 0; k < coarse.size(); ++k) {
      const double mass =
          apply_local_operator(shape, f.vector, 0, coarse.support_projector(k, 0)).squaredNorm();
      if (mass > best_mass) {
        best_mass = mass;
        best = k;
      }
    }
    map.push_back(best);
  }
  for (std::size_t k = 0; k < coarse.size(); ++k) {
    Vector sum = Vector::Zero(static_cast<Eigen::Index>(shape.total()));
    bool any = false;
    for (std::size_t j = 0; j < fine.size(); ++j) {
      if (map[j] != k) continue;
      sum += component(fine.branch(j));
      any = true;
    }
    if (!any || (sum - component(coarse.branch(k))).norm() > tol) return std::nullopt;
  }
  return map;
}

bool equivalent(const BranchDecomposition& a, const BranchDecomposition& b, double tol) {
  if (a.size() != b.size() || !(a.shape() == b.shape())) return false;
  std::vector<bool> used(b.size(), false);
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::size_t best = 0;
    double best_overlap = -1.0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double o = std::abs(a.branch(i).vector.dot(b.branch(j).vector));
      if (o > best_overlap) {
        best_overlap = o;
        best = j;
      }
    }
    if (used[best]) return false;
    used[best] = true;
    if ((component(a.branch(i)) - component(b.branch(best))).norm() > tol) return false;
    for (std::size_t n = 0; n < a.shape().num_subsystems(); ++n) {
      if (max_abs(a.support_projector(i, n) - b.support_projector(best, n)) > tol) return false;
    }
  }
  return true;
}

}  // namespace lodecomp

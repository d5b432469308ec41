#include "lodecomp/entanglement.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/QR>

#include "lodecomp/errors.hpp"

namespace lodecomp {

double EntropyReport::entropy(EntropyUnit unit) const {
  return unit == EntropyUnit::bits ? entropy_bits : entropy_bits * std::numbers::ln2;
}

double shannon_entropy(std::span<const double> p, EntropyUnit unit) {
  double s = 0.0;
  for (double x : p) {
    if (x > 0.0) s -= x * std::log2(x);
  }
  s = std::max(s, 0.0);
  return unit == EntropyUnit::bits ? s : s * std::numbers::ln2;
}

EntropyReport entropy_report(const MaximalResult& result) {
  EntropyReport r;
  r.weights = result.decomposition.weights();
  r.branch_count = r.weights.size();
  r.entropy_bits = r.branch_count == 1 ? 0.0 : shannon_entropy(r.weights);
  r.degenerate_spectrum = result.diagnostics.degenerate_spectrum;
  r.non_unique = result.diagnostics.non_unique;
  r.path = result.diagnostics.path;
  return r;
}

EntropyReport e_lo(const StateTensor& state, const MaximalOptions& options) {
  return entropy_report(maximal_decomposition(state, options));
}

void require_unitary(const Matrix& u) {
  if (u.rows() != u.cols() || u.rows() == 0) throw InvalidArgument("unitary must be square");
  const double err = (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
  if (err > 1e-10) throw InvalidArgument("matrix is not unitary");
}

StateTensor apply_local_unitary(const StateTensor& state, std::size_t n, const Matrix& u) {
  require_unitary(u);
  return StateTensor(state.shape(), apply_local_operator(state.shape(), state.amps(), n, u));
}

StateTensor apply_pairwise_unitary(const StateTensor& state, std::size_t n, std::size_t m,
                                   const Matrix& u) {
  require_unitary(u);
  return StateTensor(state.shape(), apply_pair_operator(state.shape(), state.amps(), n, m, u));
}

Matrix random_unitary(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto dd = static_cast<Eigen::Index>(d);
  Matrix z(dd, dd);
  for (Eigen::Index c = 0; c < dd; ++c) {
    for (Eigen::Index r = 0; r < dd; ++r) z(r, c) = Complex(gauss(rng), gauss(rng));
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ() * Matrix::Identity(dd, dd);
  const Matrix rr = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < dd; ++k) {
    const double a = std::abs(rr(k, k));
    if (a > 0.0) q.col(k) *= rr(k, k) / a;
  }
  return q;
}

Matrix singlet_creating_unitary(std::size_t dn, std::size_t dm, std::size_t k) {
  if (dn < 2 * k || dm < 2 * k) {
    throw InvalidArgument("singlet-creating unitary needs local dimensions >= 2k");
  }
  const auto D = static_cast<Eigen::Index>(dn * dm);
  Matrix u = Matrix::Identity(D, D);
  const double h = 1.0 / std::numbers::sqrt2;
  for (std::size_t i = 0; i < k; ++i) {
    const auto same = static_cast<Eigen::Index>(i * dm + i);
    const auto outside = static_cast<Eigen::Index>((k + i) * dm + (k + i));
    u(same, same) = h;
    u(same, outside) = h;
    u(outside, same) = h;
    u(outside, outside) = -h;
  }
  return u;
}

Matrix random_block_aligned_unitary(std::size_t dn, std::size_t dm,
                                    const std::vector<std::vector<std::size_t>>& blocks_n,
                                    const std::vector<std::vector<std::size_t>>& blocks_m,
                                    std::mt19937_64& rng) {
  if (blocks_n.size() != blocks_m.size()) {
    throw InvalidArgument("block lists must pair up");
  }
  const auto D = static_cast<Eigen::Index>(dn * dm);
  Matrix u = Matrix::Identity(D, D);
  std::vector<bool> used(static_cast<std::size_t>(D), false);
  for (std::size_t i = 0; i < blocks_n.size(); ++i) {
    std::vector<Eigen::Index> idx;
    for (std::size_t a : blocks_n[i]) {
      for (std::size_t b : blocks_m[i]) {
        if (a >= dn || b >= dm) throw InvalidArgument("block index out of range");
        const auto flat = static_cast<Eigen::Index>(a * dm + b);
        if (used[static_cast<std::size_t>(flat)]) throw InvalidArgument("blocks overlap");
        used[static_cast<std::size_t>(flat)] = true;
        idx.push_back(flat);
      }
    }
    const Matrix v = random_unitary(idx.size(), rng);
    for (std::size_t r = 0; r < idx.size(); ++r) {
      for (std::size_t c = 0; c < idx.size(); ++c) {
        u(idx[r], idx[c]) = v(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      }
    }
  }
  return u;
}

}  // namespace lodecomp

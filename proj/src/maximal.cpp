#include "lodecomp/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <sstream>

#include "lodecomp/errors.hpp"
#include "lodecomp/spectral.hpp"
#include "lodecomp/union_find.hpp"

namespace lodecomp {

namespace {

constexpr double kIndependenceTol = 1e-8;
constexpr std::size_t kMaxSbdRounds = 100;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return splitmix(splitmix(splitmix(seed) ^ a) ^ b);
}

Matrix concat_columns(const std::vector<const Matrix*>& parts, Eigen::Index rows) {
  Eigen::Index cols = 0;
  for (const Matrix* p : parts) cols += p->cols();
  Matrix out(rows, cols);
  Eigen::Index at = 0;
  for (const Matrix* p : parts) {
    out.middleCols(at, p->cols()) = *p;
    at += p->cols();
  }
  return out;
}

// One randomized splitting pass followed by the soundness merge. Blocks are
// in support coordinates.
SubspacePartition split_and_merge(const SubspacePartition& blocks,
                                  const std::vector<Matrix>& family, const Tolerances& tol,
                                  std::mt19937_64& rng) {
  const Eigen::Index r = family.front().rows();
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix k = Matrix::Zero(r, r);
  for (const Matrix& f : family) k += gauss(rng) * f;
  const double threshold = tol.degeneracy * std::max(1.0, k.norm());

  std::vector<Matrix> parts;
  for (const Matrix& b : blocks) {
    std::vector<double> values;
    Matrix vectors;
    hermitian_eigensystem(b.adjoint() * k * b, values, vectors);
    for (const auto& cluster : cluster_eigenvalues(values, threshold)) {
      Matrix sub(b.cols(), static_cast<Eigen::Index>(cluster.size()));
      for (std::size_t c = 0; c < cluster.size(); ++c) {
        sub.col(static_cast<Eigen::Index>(c)) = vectors.col(static_cast<Eigen::Index>(cluster[c]));
      }
      parts.push_back(b * sub);
    }
  }

  // Parts coupled by any family member belong together.
  UnionFind uf(parts.size());
  for (std::size_t a = 0; a < parts.size(); ++a) {
    for (std::size_t b = a + 1; b < parts.size(); ++b) {
      for (const Matrix& f : family) {
        if ((parts[a].adjoint() * f * parts[b]).squaredNorm() > tol.edge) {
          uf.unite(a, b);
          break;
        }
      }
    }
  }
  SubspacePartition merged;
  for (const auto& group : uf.groups()) {
    std::vector<const Matrix*> members;
    for (std::size_t g : group) members.push_back(&parts[g]);
    merged.push_back(concat_columns(members, r));
  }
  return merged;
}

std::vector<SubspacePartition> eigenvector_blocks(const std::vector<SpectralData>& spectra) {
  std::vector<SubspacePartition> out;
  for (const SpectralData& s : spectra) {
    SubspacePartition part;
    for (std::size_t mu = 0; mu < s.support_rank; ++mu) {
      part.push_back(s.eigenvectors.col(static_cast<Eigen::Index>(mu)));
    }
    out.push_back(std::move(part));
  }
  return out;
}

// Branches from the connected components of one correlation graph.
std::vector<Branch> branches_from_graph(const StateTensor& state,
                                        const std::vector<SubspacePartition>& partitions,
                                        const CorrelationGraph& graph, const Tolerances& tol) {
  const std::size_t N = state.num_subsystems();
  std::vector<Branch> out;
  for (const auto& comp : graph.components) {
    std::vector<std::vector<const Matrix*>> per_subsystem(N);
    for (std::size_t node : comp) {
      const GraphNode& gn = graph.nodes[node];
      per_subsystem[gn.subsystem].push_back(&partitions[gn.subsystem][gn.block]);
    }
    Branch b;
    for (std::size_t n = 0; n < N; ++n) {
      b.supports.push_back(
          concat_columns(per_subsystem[n], static_cast<Eigen::Index>(state.dim(n))));
    }
    const Vector comp_vec = apply_local_operator(state.shape(), state.amps(), 0,
                                                 b.supports[0] * b.supports[0].adjoint());
    b.weight = comp_vec.squaredNorm();
    if (b.weight <= tol.min_weight) continue;
    b.vector = comp_vec / std::sqrt(b.weight);
    out.push_back(std::move(b));
  }
  return out;
}

double residual_of(const Shape& shape, const Vector& amps, const std::vector<Branch>& branches) {
  double worst = 0.0;
  for (const Branch& b : branches) {
    const Vector target = std::sqrt(b.weight) * b.vector;
    for (std::size_t n = 0; n < shape.num_subsystems(); ++n) {
      const Vector q = apply_local_operator(shape, amps, n, b.supports[n] * b.supports[n].adjoint());
      worst = std::max(worst, (q - target).norm());
    }
  }
  return worst;
}

bool splittable(const Branch& b) {
  return std::any_of(b.supports.begin(), b.supports.end(),
                     [](const Matrix& s) { return s.cols() > 1; });
}

CorrelationGraph graph_or_throw(const StateTensor& state,
                                const std::vector<SubspacePartition>& partitions, double t_edge) {
  try {
    return build_correlation_graph(state, partitions, t_edge);
  } catch (const InvalidArgument& e) {
    // Partitions produced internally; a rejection means a tolerance broke down.
    throw InternalConsistencyError(std::string("block partition rejected: ") + e.what());
  }
}

}  // namespace

std::string_view to_string(ConstructionPath path) {
  switch (path) {
    case ConstructionPath::schmidt: return "schmidt";
    case ConstructionPath::eigenvector_graph: return "eigenvector_graph";
    case ConstructionPath::block_refinement: return "block_refinement";
  }
  return "unknown";
}

std::optional<ConstructionPath> parse_construction_path(std::string_view name) {
  for (auto p : {ConstructionPath::schmidt, ConstructionPath::eigenvector_graph,
                 ConstructionPath::block_refinement}) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

std::vector<Matrix> correlation_family(const StateTensor& state, std::size_t n) {
  const std::size_t N = state.num_subsystems();
  if (n >= N) throw InvalidArgument("subsystem index out of range");
  const auto dn = static_cast<Eigen::Index>(state.dim(n));
  const Complex two_i(0.0, 2.0);
  std::vector<Matrix> family;
  auto push = [&](Matrix m) {
    if (m.cwiseAbs().maxCoeff() > 1e-14) family.push_back(std::move(m));
  };
  for (std::size_t m = 0; m < N; ++m) {
    if (m == n) continue;
    const std::size_t keep[] = {n, m};
    const Matrix rho = reduced_matrix(state.shape(), state.amps(), keep);
    const auto dm = static_cast<Eigen::Index>(state.dim(m));
    for (Eigen::Index a = 0; a < dm; ++a) {
      for (Eigen::Index b = a; b < dm; ++b) {
        // M_ab[x, y] = <x a| rho |y b>
        Matrix mab(dn, dn);
        for (Eigen::Index x = 0; x < dn; ++x) {
          for (Eigen::Index y = 0; y < dn; ++y) mab(x, y) = rho(x * dm + a, y * dm + b);
        }
        if (a == b) {
          push(0.5 * (mab + mab.adjoint()));
        } else {
          push(0.5 * (mab + mab.adjoint()));
          push((mab - mab.adjoint()) / two_i);
        }
      }
    }
  }
  return family;
}

SbdResult sbd_refine(const StateTensor& state, std::size_t n, const Tolerances& tol,
                     std::uint64_t seed, int stable_rounds) {
  if (state.num_subsystems() <= 2) {
    throw UnsupportedOperation("block refinement needs at least three subsystems");
  }
  const SpectralData spectrum = local_spectrum(state, n, tol);
  const Matrix support = spectrum.support_basis();
  const Eigen::Index r = support.cols();
  SbdResult result;
  if (r <= 1) {
    result.blocks.push_back(support);
    return result;
  }

  std::vector<Matrix> family;
  for (const Matrix& f : correlation_family(state, n)) {
    Matrix c = support.adjoint() * f * support;
    if (c.cwiseAbs().maxCoeff() > 1e-14) family.push_back(std::move(c));
  }

  SubspacePartition blocks{Matrix::Identity(r, r)};
  if (!family.empty()) {
    std::mt19937_64 rng(derive_seed(seed, n, 0x5bd1e995ULL));
    int stable = 0;
    while (stable < stable_rounds && result.rounds < kMaxSbdRounds) {
      ++result.rounds;
      SubspacePartition next = split_and_merge(blocks, family, tol, rng);
      stable = next.size() == blocks.size() ? stable + 1 : 0;
      blocks = std::move(next);
    }
  }
  for (const Matrix& b : blocks) result.blocks.push_back(support * b);
  return result;
}

AssemblyResult assemble_branches(const StateTensor& state,
                                 const std::vector<SubspacePartition>& partitions,
                                 const MaximalOptions& options, bool refine) {
  const Tolerances& tol = options.tolerances;
  CorrelationGraph graph = graph_or_throw(state, partitions, tol.edge);
  std::vector<Branch> branches = branches_from_graph(state, partitions, graph, tol);
  const double residual = residual_of(state.shape(), state.amps(), branches);
  if (residual > kIndependenceTol) {
    std::ostringstream os;
    os << "branch depends on the projecting subsystem (residual " << residual << ")";
    throw InternalConsistencyError(os.str());
  }

  std::size_t splits = 0;
  if (refine && state.num_subsystems() > 2) {
    std::deque<Branch> work(branches.begin(), branches.end());
    std::vector<Branch> done;
    std::uint64_t counter = 0;
    while (!work.empty()) {
      Branch b = std::move(work.front());
      work.pop_front();
      if (!splittable(b)) {
        done.push_back(std::move(b));
        continue;
      }
      const StateTensor sub(state.shape(), b.vector);
      const std::uint64_t sub_seed = derive_seed(options.seed, 0xf1f0ULL, ++counter);
      std::vector<SubspacePartition> sub_parts;
      for (std::size_t n = 0; n < state.num_subsystems(); ++n) {
        sub_parts.push_back(sbd_refine(sub, n, tol, sub_seed, options.stable_rounds).blocks);
      }
      MaximalOptions sub_options = options;
      sub_options.seed = sub_seed;
      AssemblyResult inner = assemble_branches(sub, sub_parts, sub_options, false);
      if (inner.decomposition.size() <= 1) {
        done.push_back(std::move(b));
        continue;
      }
      ++splits;
      for (const Branch& piece : inner.decomposition.branches()) {
        Branch lifted = piece;
        lifted.weight = b.weight * piece.weight;
        work.push_back(std::move(lifted));
      }
    }
    branches = std::move(done);
  }

  sort_branches(branches);
  BranchDecomposition decomposition(state, std::move(branches));
  const double final_residual = n_independence_residual(decomposition);
  return AssemblyResult{std::move(decomposition), std::move(graph), final_residual, splits};
}

double n_independence_residual(const BranchDecomposition& d) {
  return residual_of(d.shape(), d.state().amps(), d.branches());
}

MaximalResult maximal_decomposition(const StateTensor& state, const MaximalOptions& options) {
  const std::size_t N = state.num_subsystems();
  if (N < 2) throw InvalidArgument("decomposition needs at least two subsystems");
  const Tolerances& tol = options.tolerances;

  Diagnostics diag;
  diag.tolerances = tol;
  diag.seed = options.seed;
  diag.stable_rounds = options.stable_rounds;

  std::vector<SpectralData> spectra;
  for (std::size_t n = 0; n < N; ++n) {
    spectra.push_back(local_spectrum(state, n, tol));
    diag.degenerate_spectrum = diag.degenerate_spectrum || spectra.back().support_degenerate();
  }

  std::vector<Branch> branches;
  if (N == 2) {
    diag.path = ConstructionPath::schmidt;
    const SchmidtDecomposition sd = schmidt_decompose(state, {0}, tol);
    diag.non_unique = sd.degenerate;
    for (std::size_t k = 0; k < sd.coefficients.size(); ++k) {
      const auto kk = static_cast<Eigen::Index>(k);
      Branch b;
      b.weight = sd.coefficients[k] * sd.coefficients[k];
      b.vector = tensor_compose(StateTensor({state.dim(0)}, sd.left_vectors.col(kk)),
                                StateTensor({state.dim(1)}, sd.right_vectors.col(kk)))
                     .amps();
      b.supports = {sd.left_vectors.col(kk), sd.right_vectors.col(kk)};
      branches.push_back(std::move(b));
    }
    diag.min_accepted_edge = std::numeric_limits<double>::infinity();
    sort_branches(branches);
  } else {
    std::vector<SubspacePartition> partitions;
    bool refine = false;
    if (!diag.degenerate_spectrum && !options.force_block_refinement) {
      diag.path = ConstructionPath::eigenvector_graph;
      partitions = eigenvector_blocks(spectra);
    } else {
      diag.path = ConstructionPath::block_refinement;
      refine = true;
      for (std::size_t n = 0; n < N; ++n) {
        SbdResult sbd = sbd_refine(state, n, tol, options.seed, options.stable_rounds);
        diag.sbd_rounds.push_back(sbd.rounds);
        partitions.push_back(std::move(sbd.blocks));
      }
    }
    AssemblyResult assembled = assemble_branches(state, partitions, options, refine);
    diag.min_accepted_edge = assembled.graph.min_accepted_edge;
    diag.max_rejected_edge = assembled.graph.max_rejected_edge;
    diag.refinement_splits = assembled.refinement_splits;
    branches = assembled.decomposition.branches();
  }

  BranchDecomposition decomposition(state, std::move(branches));
  diag.n_independence_residual = n_independence_residual(decomposition);
  const VerificationReport report = verify_lo(decomposition);
  if (!report.passed || diag.n_independence_residual > kIndependenceTol) {
    std::ostringstream os;
    os << "maximal decomposition failed verification (path " << to_string(diag.path)
       << ", n-independence residual " << diag.n_independence_residual << ")";
    throw InternalConsistencyError(os.str(), report.render());
  }
  return MaximalResult{std::move(decomposition), std::move(diag)};
}

}  // namespace lodecomp

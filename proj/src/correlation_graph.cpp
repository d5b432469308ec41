#include "lodecomp/correlation_graph.hpp"

#include <algorithm>
#include <string>

#include "lodecomp/errors.hpp"
#include "lodecomp/union_find.hpp"

namespace lodecomp {

namespace {

void check_partition(const StateTensor& state, std::size_t n, const SubspacePartition& part) {
  const auto d = static_cast<Eigen::Index>(state.dim(n));
  const std::string where = "subsystem " + std::to_string(n) + ": ";
  if (part.empty()) throw InvalidArgument(where + "no blocks");
  Matrix total = Matrix::Zero(d, d);
  for (std::size_t a = 0; a < part.size(); ++a) {
    const Matrix& ba = part[a];
    if (ba.rows() != d || ba.cols() == 0) throw InvalidArgument(where + "malformed block");
    const double err =
        (ba.adjoint() * ba - Matrix::Identity(ba.cols(), ba.cols())).cwiseAbs().maxCoeff();
    if (err > 1e-8) throw InvalidArgument(where + "block basis is not orthonormal");
    for (std::size_t b = a + 1; b < part.size(); ++b) {
      if ((ba.adjoint() * part[b]).cwiseAbs().maxCoeff() > 1e-8) {
        throw InvalidArgument(where + "blocks are not mutually orthogonal");
      }
    }
    total += ba * ba.adjoint();
  }
  const Vector covered = apply_local_operator(state.shape(), state.amps(), n, total);
  if ((covered - state.amps()).norm() > 1e-8) {
    throw InvalidArgument(where + "blocks do not span the local support");
  }
}

}  // namespace

CorrelationGraph build_correlation_graph(const StateTensor& state,
                                         const std::vector<SubspacePartition>& blocks,
                                         double t_edge) {
  const std::size_t N = state.num_subsystems();
  if (blocks.size() != N) throw InvalidArgument("need one block partition per subsystem");
  for (std::size_t n = 0; n < N; ++n) check_partition(state, n, blocks[n]);

  CorrelationGraph g;
  std::vector<std::size_t> first_node(N);
  std::vector<Vector> projected;  // Pi_a |psi> for every node
  for (std::size_t n = 0; n < N; ++n) {
    first_node[n] = g.nodes.size();
    for (std::size_t a = 0; a < blocks[n].size(); ++a) {
      g.nodes.push_back({n, a});
      projected.push_back(apply_local_operator(state.shape(), state.amps(), n,
                                               blocks[n][a] * blocks[n][a].adjoint()));
    }
  }

  UnionFind uf(g.nodes.size());
  for (std::size_t n = 0; n < N; ++n) {
    for (std::size_t m = n + 1; m < N; ++m) {
      for (std::size_t a = 0; a < blocks[n].size(); ++a) {
        const std::size_t na = first_node[n] + a;
        for (std::size_t b = 0; b < blocks[m].size(); ++b) {
          const std::size_t nb = first_node[m] + b;
          const double w = apply_local_operator(state.shape(), projected[na], m,
                                                blocks[m][b] * blocks[m][b].adjoint())
                               .squaredNorm();
          if (w > t_edge) {
            g.edges.push_back({na, nb, w});
            g.min_accepted_edge = std::min(g.min_accepted_edge, w);
            uf.unite(na, nb);
          } else {
            g.max_rejected_edge = std::max(g.max_rejected_edge, w);
          }
        }
      }
    }
  }

  g.components = uf.groups();
  g.component_of.assign(g.nodes.size(), 0);
  for (std::size_t c = 0; c < g.components.size(); ++c) {
    for (std::size_t node : g.components[c]) g.component_of[node] = c;
  }
  return g;
}

}  // namespace lodecomp

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "lodecomp/catalog.hpp"
#include "lodecomp/entanglement.hpp"
#include "lodecomp/errors.hpp"
#include "lodecomp/maximal.hpp"
#include "lodecomp/oracle.hpp"
#include "lodecomp/spectral.hpp"
#include "support/dense_oracle.hpp"

using namespace lodecomp;

namespace {

std::vector<double> sorted_weights(const BranchDecomposition& d) {
  auto w = d.weights();
  std::sort(w.rbegin(), w.rend());
  return w;
}

void check_weights(const BranchDecomposition& d, std::vector<double> expect, double tol = 1e-9) {
  std::sort(expect.rbegin(), expect.rend());
  const auto got = sorted_weights(d);
  REQUIRE(got.size() == expect.size());
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - expect[i]) < tol);
}

}  // namespace

TEST_CASE("GHZ has two equal branches") {
  const auto r = maximal_decomposition(ghz_state({2, 2, 2}));
  check_weights(r.decomposition, {0.5, 0.5});
  CHECK(r.diagnostics.path == ConstructionPath::block_refinement);
  CHECK(r.diagnostics.degenerate_spectrum);
  CHECK(verify_lo(r.decomposition).passed);
}

TEST_CASE("W, U, V and X do not branch") {
  for (const auto& s : {w_state({2, 2, 2}), u_state(), v_state(), x_state()}) {
    const auto r = maximal_decomposition(s);
    CHECK(r.decomposition.size() == 1);
    CHECK(std::abs(r.decomposition.branch(0).weight - 1.0) < 1e-12);
  }
}

TEST_CASE("Z state on four sites") {
  const auto r = maximal_decomposition(z_state({3, 3, 3, 3}, {0.5, 0.3, 0.2}));
  check_weights(r.decomposition, {0.5, 0.3, 0.2});
  CHECK(r.diagnostics.path == ConstructionPath::eigenvector_graph);
  CHECK(r.diagnostics.n_independence_residual < 1e-12);
}

TEST_CASE("Z state survives random local rotations") {
  const auto z = z_state({3, 3, 3, 3}, {0.5, 0.3, 0.2});
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto r = maximal_decomposition(dress_with_local_unitaries(z, seed));
    check_weights(r.decomposition, {0.5, 0.3, 0.2});
  }
}

TEST_CASE("forced refinement agrees with the fast path") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto s = random_branched_state({3, 3, 3}, 2 + seed % 2, seed);
    MaximalOptions forced;
    forced.force_block_refinement = true;
    const auto fast = maximal_decomposition(s);
    const auto slow = maximal_decomposition(s, forced);
    CHECK(slow.diagnostics.path == ConstructionPath::block_refinement);
    CHECK(equivalent(fast.decomposition, slow.decomposition));
  }
}

TEST_CASE("GHZ refinement splits into computational lines") {
  const auto ghz = ghz_state({2, 2, 2});
  const auto r = sbd_refine(ghz, 0, Tolerances{}, 0);
  REQUIRE(r.blocks.size() == 2);
  std::vector<bool> seen(2, false);
  for (const Matrix& b : r.blocks) {
    REQUIRE(b.cols() == 1);
    const dense::Matrix p = dense::projector(b);
    const bool is0 = (p - dense::projector(dense::basis_vector(2, 0))).norm() < 1e-10;
    const bool is1 = (p - dense::projector(dense::basis_vector(2, 1))).norm() < 1e-10;
    CHECK((is0 || is1));
    seen[is0 ? 0 : 1] = true;
  }
  CHECK(seen[0]);
  CHECK(seen[1]);
}

TEST_CASE("uncorrelated site refines to its pure support") {
  const auto r = sbd_refine(u_state(), 2, Tolerances{}, 0);
  REQUIRE(r.blocks.size() == 1);
  CHECK(r.blocks[0].cols() == 1);
}

TEST_CASE("refinement on a non-degenerate state refines the eigenvector graph") {
  const auto s = random_branched_state({3, 3, 3}, 3, 42);
  const auto fast = maximal_decomposition(s).decomposition;
  for (std::size_t n = 0; n < 3; ++n) {
    const auto r = sbd_refine(s, n, Tolerances{}, 7);
    for (const Matrix& b : r.blocks) {
      const dense::Matrix p = dense::projector(b);
      // each block sits inside exactly one branch support
      std::size_t owners = 0;
      for (std::size_t i = 0; i < fast.size(); ++i) {
        const dense::Matrix q = fast.support_projector(i, n);
        if ((q * p - p).norm() < 1e-8) ++owners;
        else CHECK((q * p).norm() < 1e-8);
      }
      CHECK(owners == 1);
    }
  }
}

TEST_CASE("refinement needs more than two sites") {
  CHECK_THROWS_AS(sbd_refine(ghz_state({2, 2}), 0, Tolerances{}, 0), UnsupportedOperation);
}

TEST_CASE("refinement is reproducible for a seed") {
  const auto s = dress_with_local_unitaries(z_state({3, 3, 3}, {0.4, 0.3, 0.3}), 9);
  const auto a = sbd_refine(s, 1, Tolerances{}, 123);
  const auto b = sbd_refine(s, 1, Tolerances{}, 123);
  REQUIRE(a.blocks.size() == b.blocks.size());
  for (std::size_t i = 0; i < a.blocks.size(); ++i) CHECK(a.blocks[i] == b.blocks[i]);
}

TEST_CASE("assembling from refined GHZ blocks") {
  const auto ghz = ghz_state({2, 2, 2});
  std::vector<SubspacePartition> parts;
  for (std::size_t n = 0; n < 3; ++n) parts.push_back(sbd_refine(ghz, n, Tolerances{}, 0).blocks);
  const auto a = assemble_branches(ghz, parts, MaximalOptions{}, false);
  CHECK(a.decomposition.size() == 2);
  CHECK(a.graph.components.size() == 2);
}

TEST_CASE("a fully connected graph gives back the state") {
  const auto s = random_state({2, 3, 2}, 17);
  std::vector<SubspacePartition> parts;
  for (std::size_t n = 0; n < 3; ++n) parts.push_back({local_spectrum(s, n).support_basis()});
  const auto a = assemble_branches(s, parts, MaximalOptions{});
  REQUIRE(a.decomposition.size() == 1);
  CHECK(std::abs(std::abs(inner_product(s.shape(), a.decomposition.branch(0).vector, s.shape(),
                                        s.amps())) -
                 1.0) < 1e-12);
}

TEST_CASE("Bell ancillas do not change the weights") {
  const std::vector<double> p{0.5, 0.3, 0.2};
  const auto z = z_state({3, 3, 3}, p);
  const auto bell = ghz_state({2, 2});
  // sites: z0 z1 z2 b0 b1 -> move b0 next to z0 and b1 next to z1, then merge
  auto composed = tensor_compose(z, bell);
  const std::vector<std::size_t> perm{0, 3, 1, 4, 2};
  const auto arranged = permute_subsystems(composed, perm);
  const StateTensor merged({6, 6, 3}, arranged.amps());
  const auto r = maximal_decomposition(merged);
  check_weights(r.decomposition, p);
  CHECK(std::abs(shannon_entropy(r.decomposition.weights()) - dense::shannon_bits(p)) < 1e-9);
}

TEST_CASE("two sites use the Schmidt decomposition") {
  const auto s = random_state({3, 4}, 8);
  const auto r = maximal_decomposition(s);
  CHECK(r.diagnostics.path == ConstructionPath::schmidt);
  CHECK_FALSE(r.diagnostics.non_unique);
  const auto ref = dense::support_spectrum({3, 4}, s.amps(), {0});
  check_weights(r.decomposition, ref);
  const auto bell = maximal_decomposition(ghz_state({2, 2}));
  CHECK(bell.diagnostics.non_unique);
}

TEST_CASE("single-site states are rejected") {
  CHECK_THROWS_AS(maximal_decomposition(StateTensor({3}, Vector::Ones(3))), InvalidArgument);
}

TEST_CASE("diagnostics record the options") {
  MaximalOptions o;
  o.seed = 99;
  o.tolerances.edge = 1e-11;
  const auto r = maximal_decomposition(ghz_state({2, 2, 2}), o);
  CHECK(r.diagnostics.seed == 99);
  CHECK(r.diagnostics.tolerances.edge == 1e-11);
  CHECK(r.diagnostics.sbd_rounds.size() == 3);
  CHECK(r.diagnostics.max_rejected_edge <= 1e-11);
}

TEST_CASE("construction path names") {
  for (auto p : {ConstructionPath::schmidt, ConstructionPath::eigenvector_graph,
                 ConstructionPath::block_refinement}) {
    CHECK(parse_construction_path(to_string(p)) == p);
  }
  CHECK_FALSE(parse_construction_path("nope").has_value());
}

TEST_CASE("GHZ in a rotated basis still splits") {
  Vector a = Vector::Zero(8);
  for (std::size_t f : {0u, 3u, 5u, 6u}) a(static_cast<Eigen::Index>(f)) = 0.5;
  const auto r = maximal_decomposition(StateTensor({2, 2, 2}, a));
  check_weights(r.decomposition, {0.5, 0.5});
}

TEST_CASE("totally antisymmetric qutrit state does not branch") {
  Vector a = Vector::Zero(27);
  const int eps[6][4] = {{0, 1, 2, 1}, {1, 2, 0, 1}, {2, 0, 1, 1},
                         {0, 2, 1, -1}, {2, 1, 0, -1}, {1, 0, 2, -1}};
  for (const auto& e : eps) a(e[0] * 9 + e[1] * 3 + e[2]) = static_cast<double>(e[3]);
  const StateTensor s({3, 3, 3}, a);
  CHECK(local_spectrum(s, 0).support_degenerate());
  const auto r = maximal_decomposition(s);
  CHECK(r.decomposition.size() == 1);
  CHECK(oracle::verify_maximality_small(r.decomposition).verdict != oracle::Verdict::fail);
}

TEST_CASE("equal-weight planted branches under rotation") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const std::vector<std::size_t> dims{4, 4, 4};
    const auto z = z_state(dims, {0.25, 0.25, 0.25, 0.25});
    const auto s = dress_with_local_unitaries(z, seed);
    const auto r = maximal_decomposition(s, MaximalOptions{Tolerances{}, seed});
    check_weights(r.decomposition, {0.25, 0.25, 0.25, 0.25});
    CHECK(oracle::verify_maximality_small(r.decomposition).verdict != oracle::Verdict::fail);
  }
}

TEST_CASE("degenerate blocks inside a branch") {
  // branch 0 is a Bell pair on sites 0,1 times |0> on site 2 embedded in the
  // first two levels; branch 1 is a GHZ on the upper levels
  Vector a = Vector::Zero(64);
  auto idx = [](int i, int j, int k) { return i * 16 + j * 4 + k; };
  a(idx(0, 0, 0)) = a(idx(1, 1, 0)) = std::sqrt(0.3);
  a(idx(2, 2, 2)) = a(idx(3, 3, 3)) = std::sqrt(0.2);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto s = dress_with_local_unitaries(StateTensor({4, 4, 4}, a), seed);
    const auto r = maximal_decomposition(s, MaximalOptions{Tolerances{}, seed});
    check_weights(r.decomposition, {0.6, 0.2, 0.2});
  }
}

TEST_CASE("seeds do not change the answer") {
  const auto s = dress_with_local_unitaries(ghz_state({3, 3, 3, 3}), 4);
  const auto ref = maximal_decomposition(s).decomposition;
  for (std::uint64_t seed = 1; seed < 8; ++seed) {
    const auto r = maximal_decomposition(s, MaximalOptions{Tolerances{}, seed});
    CHECK(equivalent(r.decomposition, ref));
  }
}

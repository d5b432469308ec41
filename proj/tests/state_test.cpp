#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "lodecomp/catalog.hpp"
#include "lodecomp/errors.hpp"
#include "lodecomp/state.hpp"
#include "support/dense_oracle.hpp"

using namespace lodecomp;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

StateTensor ket(std::vector<std::size_t> dims, std::vector<std::size_t> index) {
  return StateTensor::basis(std::move(dims), index);
}

}  // namespace

TEST_CASE("state rejects malformed input") {
  CHECK_THROWS_AS(StateTensor({2, 2}, Vector::Zero(3)), InvalidArgument);
  CHECK_THROWS_AS(StateTensor({2, 2}, Vector::Zero(4)), InvalidArgument);
  CHECK_THROWS_AS(StateTensor({2, 0}, Vector::Ones(0)), InvalidArgument);
  Vector bad = Vector::Ones(4);
  bad(2) = std::nan("");
  CHECK_THROWS_AS(StateTensor({2, 2}, bad), InvalidArgument);
}

TEST_CASE("state normalizes") {
  StateTensor s({2, 2}, Vector::Ones(4));
  CHECK(std::abs(s.amps().norm() - 1.0) < 1e-14);
  CHECK(std::abs(s.amp(3) - Complex(0.5, 0.0)) < 1e-14);
}

TEST_CASE("shape index round trip") {
  Shape sh({2, 3, 4});
  CHECK(sh.total() == 24);
  CHECK(sh.stride(0) == 12);
  CHECK(sh.stride(2) == 1);
  for (std::size_t f = 0; f < sh.total(); ++f) {
    const auto mi = sh.multi_index(f);
    CHECK(sh.flat_index(mi) == f);
    CHECK(mi == dense::digits({2, 3, 4}, f));
  }
}

TEST_CASE("partial trace of GHZ on one site is maximally mixed") {
  const auto ghz = ghz_state({2, 2, 2});
  const auto rho = partial_trace(ghz, {1});
  CHECK((rho.matrix - 0.5 * Matrix::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("partial trace of |0>|+> on the second site") {
  Vector plus(2);
  plus << kInvSqrt2, kInvSqrt2;
  const auto s = tensor_compose(ket({2}, {0}), StateTensor({2}, plus));
  const auto rho = partial_trace(s, {1});
  Matrix expect(2, 2);
  expect << 0.5, 0.5, 0.5, 0.5;
  CHECK((rho.matrix - expect).norm() < 1e-14);
  const auto rho0 = partial_trace(s, {0});
  CHECK((rho0.matrix - dense::projector(dense::basis_vector(2, 0))).norm() < 1e-14);
}

TEST_CASE("partial trace matches index-loop oracle") {
  const std::vector<std::size_t> dims{2, 3, 2, 3};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto s = random_state(dims, seed);
    for (const std::vector<std::size_t>& keep :
         {std::vector<std::size_t>{2}, {0, 3}, {3, 1}, {0, 1, 2}}) {
      const auto rho = partial_trace(s, keep);
      CHECK(rho.subsystems == keep);
      CHECK((rho.matrix - dense::reduced(dims, s.amps(), keep)).norm() < 1e-12);
      CHECK(std::abs(rho.matrix.trace() - Complex(1.0, 0.0)) < 1e-10);
    }
  }
}

TEST_CASE("partial trace rejects bad keep sets") {
  const auto s = random_state({2, 2, 2}, 3);
  CHECK_THROWS_AS(partial_trace(s, {}), InvalidArgument);
  CHECK_THROWS_AS(partial_trace(s, {0, 1, 2}), InvalidArgument);
  CHECK_THROWS_AS(partial_trace(s, {0, 0}), InvalidArgument);
  CHECK_THROWS_AS(partial_trace(s, {5}), InvalidArgument);
}

TEST_CASE("unfold and fold are inverse") {
  const auto s = random_state({3, 2, 4}, 9);
  const std::vector<std::size_t> rows{2, 0};
  const Matrix m = unfold(s.shape(), s.amps(), rows);
  CHECK(m.rows() == 12);
  CHECK(m.cols() == 2);
  CHECK((fold(s.shape(), m, rows) - s.amps()).norm() < 1e-15);
}

TEST_CASE("local projector on GHZ") {
  const auto ghz = ghz_state({2, 2, 2});
  const auto r = apply_local_projector(ghz, LocalProjector::computational(0, 2, 0));
  CHECK(std::abs(r.weight - 0.5) < 1e-14);
  Vector expect = Vector::Zero(8);
  expect(0) = kInvSqrt2;
  CHECK((r.vector - expect).norm() < 1e-14);
}

TEST_CASE("full-space projector leaves the state unchanged") {
  const auto s = random_state({3, 2, 2}, 4);
  const auto r = apply_local_projector(s, LocalProjector(1, Matrix::Identity(2, 2)));
  CHECK(std::abs(r.weight - 1.0) < 1e-14);
  CHECK((r.vector - s.amps()).norm() < 1e-14);
}

TEST_CASE("local projector on W") {
  const auto w = w_state({2, 2, 2});
  const auto r = apply_local_projector(w, LocalProjector::computational(0, 2, 1));
  CHECK(std::abs(r.weight - 1.0 / 3.0) < 1e-14);
  Vector expect = Vector::Zero(8);
  expect(4) = 1.0 / std::sqrt(3.0);
  CHECK((r.vector - expect).norm() < 1e-14);
}

TEST_CASE("local projector requires an orthonormal basis") {
  Matrix b(2, 1);
  b << 1.0, 1.0;
  CHECK_THROWS_AS(LocalProjector(0, b), InvalidArgument);
  const auto s = random_state({2, 2}, 1);
  CHECK_THROWS_AS(apply_local_projector(s, LocalProjector(0, Matrix::Identity(3, 3))),
                  InvalidArgument);
}

TEST_CASE("joint projection norms on GHZ") {
  const auto ghz = ghz_state({2, 2, 2});
  CHECK(joint_projection_norm(ghz, LocalProjector::computational(0, 2, 0),
                              LocalProjector::computational(1, 2, 1)) < 1e-15);
  CHECK(std::abs(joint_projection_norm(ghz, LocalProjector::computational(0, 2, 0),
                                       LocalProjector::computational(1, 2, 0)) -
                 0.5) < 1e-14);
  CHECK_THROWS_AS(joint_projection_norm(ghz, LocalProjector::computational(0, 2, 0),
                                        LocalProjector::computational(0, 2, 1)),
                  InvalidArgument);
}

TEST_CASE("joint projection norm is symmetric and matches explicit projectors") {
  std::mt19937_64 rng(77);
  const std::vector<std::size_t> dims{3, 2, 3};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = random_state(dims, seed);
    const auto a = random_state({3}, seed + 100).amps();
    const auto b = random_state({3}, seed + 200).amps();
    const auto p = LocalProjector::onto(0, a);
    const auto q = LocalProjector::onto(2, b);
    const double pq = joint_projection_norm(s, p, q);
    CHECK(std::abs(pq - joint_projection_norm(s, q, p)) < 1e-12);
    const dense::Vector v =
        dense::embed(dims, 0, dense::projector(a)) * dense::embed(dims, 2, dense::projector(b)) *
        s.amps();
    CHECK(std::abs(pq - v.squaredNorm()) < 1e-12);
  }
}

TEST_CASE("inner products") {
  const auto ghz = ghz_state({2, 2, 2});
  CHECK(std::abs(inner_product(ghz, ghz) - Complex(1.0, 0.0)) < 1e-14);
  CHECK(std::abs(inner_product(ket({2, 2, 2}, {0, 0, 0}), ket({2, 2, 2}, {1, 1, 1}))) < 1e-15);
  CHECK(std::abs(inner_product(ghz, ket({2, 2, 2}, {0, 0, 0})) - Complex(kInvSqrt2, 0.0)) < 1e-14);
  CHECK_THROWS_AS(inner_product(ghz, ket({2, 4}, {0, 0})), InvalidArgument);
}

TEST_CASE("tensor composition") {
  const auto s = tensor_compose(ket({2}, {0}), ket({2}, {1}));
  CHECK(s.dims() == std::vector<std::size_t>{2, 2});
  Vector expect(4);
  expect << 0, 1, 0, 0;
  CHECK((s.amps() - expect).norm() < 1e-15);

  const auto a = random_state({2, 3}, 5);
  const auto b = random_state({2, 2}, 6);
  const auto ab = tensor_compose(a, b);
  CHECK(std::abs(ab.amps().norm() - 1.0) < 1e-14);
  CHECK((ab.amps() - dense::kron(a.amps(), b.amps())).norm() < 1e-14);

  const auto g0 = tensor_compose(ghz_state({2, 2, 2}), ket({2}, {0}));
  CHECK(g0.num_subsystems() == 4);
  const auto rho = partial_trace(g0, {3});
  CHECK((rho.matrix - dense::projector(dense::basis_vector(2, 0))).norm() < 1e-14);
}

TEST_CASE("local operators match explicit embedding") {
  const std::vector<std::size_t> dims{2, 3, 2};
  const auto s = random_state(dims, 11);
  const Matrix op = Matrix::Random(3, 3);
  const Vector got = apply_local_operator(s.shape(), s.amps(), 1, op);
  CHECK((got - dense::embed(dims, 1, op) * s.amps()).norm() < 1e-12);
}

TEST_CASE("pair operators on adjacent and reversed pairs") {
  const std::vector<std::size_t> dims{2, 3, 2};
  const auto s = random_state(dims, 12);
  const Matrix op = Matrix::Random(6, 6);
  // (0,1) in natural order is kron(op, I)
  const Vector got = apply_pair_operator(s.shape(), s.amps(), 0, 1, op);
  CHECK((got - dense::kron(op, Matrix(Matrix::Identity(2, 2))) * s.amps()).norm() < 1e-12);

  const Matrix a = Matrix::Random(2, 2);
  const Matrix c = Matrix::Random(2, 2);
  const Vector prod = apply_pair_operator(s.shape(), s.amps(), 2, 0, dense::kron(c, a));
  const Vector ref = dense::embed(dims, 0, a) * (dense::embed(dims, 2, c) * s.amps());
  CHECK((prod - ref).norm() < 1e-12);
}

TEST_CASE("swap on a pair") {
  Matrix swap = Matrix::Zero(4, 4);
  swap(0, 0) = swap(3, 3) = 1.0;
  swap(1, 2) = swap(2, 1) = 1.0;
  const auto s = ket({2, 2, 2}, {0, 1, 0});
  const Vector out = apply_pair_operator(s.shape(), s.amps(), 0, 1, swap);
  CHECK((out - ket({2, 2, 2}, {1, 0, 0}).amps()).norm() < 1e-15);
}

TEST_CASE("permutation of subsystems") {
  const auto a = random_state({2}, 1);
  const auto b = random_state({3}, 2);
  const auto c = random_state({4}, 3);
  const auto abc = tensor_compose(tensor_compose(a, b), c);
  const std::vector<std::size_t> perm{2, 0, 1};
  const auto cab = permute_subsystems(abc, perm);
  CHECK(cab.dims() == std::vector<std::size_t>{4, 2, 3});
  CHECK((cab.amps() - dense::kron(dense::kron(c.amps(), a.amps()), b.amps())).norm() < 1e-14);
  CHECK_THROWS_AS(permute_subsystems(abc, std::vector<std::size_t>{0, 0, 1}), InvalidArgument);
}

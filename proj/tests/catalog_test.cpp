#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "lodecomp/catalog.hpp"
#include "lodecomp/errors.hpp"
#include "lodecomp/maximal.hpp"
#include "lodecomp/spectral.hpp"

using namespace lodecomp;

TEST_CASE("GHZ amplitudes") {
  StateSpec spec;
  spec.kind = StateKind::ghz;
  const auto s = generate(spec);
  CHECK(s.dims() == std::vector<std::size_t>{2, 2, 2});
  for (std::size_t f = 0; f < 8; ++f) {
    const double expect = (f == 0 || f == 7) ? 1.0 / std::sqrt(2.0) : 0.0;
    CHECK(std::abs(s.amp(f) - Complex(expect, 0.0)) < 1e-15);
  }
}

TEST_CASE("equal-weight Z is GHZ") {
  const auto z = z_state({2, 2, 2}, {0.5, 0.5});
  CHECK((z.amps() - ghz_state({2, 2, 2}).amps()).norm() < 1e-15);
}

TEST_CASE("W amplitudes") {
  const auto w = w_state({2, 2, 2});
  for (std::size_t f : {1u, 2u, 4u}) CHECK(std::abs(w.amp(f) - Complex(1.0 / std::sqrt(3.0), 0)) < 1e-15);
  CHECK(std::abs(w.amp(0)) == 0.0);
}

TEST_CASE("every V marginal is mixed") {
  const auto v = v_state();
  CHECK(v.dims() == std::vector<std::size_t>{2, 4, 2});
  for (std::size_t n = 0; n < 3; ++n) CHECK(local_spectrum(v, n).support_rank > 1);
}

TEST_CASE("X is three shared pairs") {
  const auto x = x_state();
  CHECK(x.dims() == std::vector<std::size_t>{4, 4, 4});
  for (std::size_t n = 0; n < 3; ++n) {
    const auto sd = local_spectrum(x, n);
    CHECK(sd.support_rank == 4);
    for (double e : sd.eigenvalues) CHECK(std::abs(e - 0.25) < 1e-12);
  }
  CHECK(maximal_decomposition(x).decomposition.size() == 1);
}

TEST_CASE("U has a product third site") {
  const auto u = u_state();
  CHECK(local_spectrum(u, 2).support_rank == 1);
  CHECK(local_spectrum(u, 0).support_rank == 2);
}

TEST_CASE("generated states are normalized and seeded") {
  for (auto kind : {StateKind::ghz, StateKind::w, StateKind::z, StateKind::u, StateKind::v,
                    StateKind::x, StateKind::product, StateKind::random,
                    StateKind::random_local_dressing}) {
    StateSpec spec;
    spec.kind = kind;
    spec.seed = 31;
    if (kind == StateKind::z) spec.weights = {0.7, 0.3};
    if (kind == StateKind::random_local_dressing) spec.base = StateKind::w;
    const auto a = generate(spec);
    const auto b = generate(spec);
    CHECK(std::abs(a.amps().norm() - 1.0) < 1e-12);
    CHECK(a.amps() == b.amps());
    CHECK(parse_state_kind(to_string(kind)) == kind);
  }
  CHECK(random_state({3, 3}, 1).amps() != random_state({3, 3}, 2).amps());
}

TEST_CASE("invalid specs are rejected") {
  CHECK_THROWS_AS(z_state({2, 2, 2}, {0.5, 0.25, 0.25}), InvalidArgument);
  CHECK_THROWS_AS(z_state({3, 3, 3}, {0.5, 0.4}), InvalidArgument);
  CHECK_THROWS_AS(z_state({3, 3, 3}, {1.2, -0.2}), InvalidArgument);
  StateSpec spec;
  spec.kind = StateKind::u;
  spec.parties = 4;
  CHECK_THROWS_AS(generate(spec), InvalidArgument);
  CHECK_FALSE(parse_state_kind("cluster").has_value());
}

TEST_CASE("branched states have the planted weights") {
  const auto w = random_weights(3, 5);
  double sum = 0;
  for (double x : w) sum += x;
  CHECK(std::abs(sum - 1.0) < 1e-14);
  for (double x : w) CHECK(x > 0.0);

  const std::vector<std::size_t> dims{3, 6, 4};
  const auto s = random_branched_state(dims, 3, 5);
  // planted weight of block i: mass on amplitudes whose every index lies in block i
  std::vector<double> planted(3, 0.0);
  double outside = 0.0;
  const Shape sh(dims);
  auto block = [](std::size_t x, std::size_t d) {
    std::size_t i = 0;
    while ((i + 1) * d / 3 <= x) ++i;
    return i;
  };
  for (std::size_t f = 0; f < sh.total(); ++f) {
    const auto mi = sh.multi_index(f);
    const std::size_t b = block(mi[0], dims[0]);
    bool aligned = true;
    for (std::size_t n = 0; n < 3; ++n) aligned = aligned && block(mi[n], dims[n]) == b;
    (aligned ? planted[b] : outside) += std::norm(s.amp(f));
  }
  CHECK(outside < 1e-28);
  auto got = maximal_decomposition(s).decomposition.weights();
  std::sort(got.begin(), got.end());
  std::sort(planted.begin(), planted.end());
  REQUIRE(got.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(got[i] - planted[i]) < 1e-9);
}

TEST_CASE("product states factor") {
  const auto p = random_product_state({2, 3, 4}, 7);
  for (std::size_t n = 0; n < 3; ++n) CHECK(local_spectrum(p, n).support_rank == 1);
}

#include "lodecomp/catalog.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "lodecomp/entanglement.hpp"
#include "lodecomp/errors.hpp"

namespace lodecomp {

namespace {

Vector gaussian_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(gauss(rng), gauss(rng));
  return v;
}

Vector zeros(const Shape& shape) { return Vector::Zero(static_cast<Eigen::Index>(shape.total())); }

void require_min_dim(const std::vector<std::size_t>& dims, std::size_t d, const char* kind) {
  for (std::size_t x : dims) {
    if (x < d) {
      throw InvalidArgument(std::string(kind) + " needs every local dimension >= " +
                            std::to_string(d));
    }
  }
}

}  // namespace

std::string_view to_string(StateKind kind) {
  switch (kind) {
    case StateKind::ghz: return "ghz";
    case StateKind::w: return "w";
    case StateKind::z: return "z";
    case StateKind::u: return "u";
    case StateKind::v: return "v";
    case StateKind::x: return "x";
    case StateKind::product: return "product";
    case StateKind::random: return "random";
    case StateKind::random_local_dressing: return "random_local_dressing";
  }
  return "unknown";
}

std::optional<StateKind> parse_state_kind(std::string_view name) {
  for (auto k : {StateKind::ghz, StateKind::w, StateKind::z, StateKind::u, StateKind::v,
                 StateKind::x, StateKind::product, StateKind::random,
                 StateKind::random_local_dressing}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::vector<std::size_t> StateSpec::effective_dims() const {
  if (!dims.empty()) return dims;
  return std::vector<std::size_t>(parties, local_dim);
}

StateTensor ghz_state(std::vector<std::size_t> dims) {
  return z_state(std::move(dims), {0.5, 0.5});
}

StateTensor w_state(std::vector<std::size_t> dims) {
  require_min_dim(dims, 2, "w");
  const Shape shape(dims);
  Vector amps = zeros(shape);
  std::vector<std::size_t> idx(dims.size(), 0);
  for (std::size_t n = 0; n < dims.size(); ++n) {
    idx[n] = 1;
    amps(static_cast<Eigen::Index>(shape.flat_index(idx))) = 1.0;
    idx[n] = 0;
  }
  return StateTensor(shape, std::move(amps));
}

StateTensor z_state(std::vector<std::size_t> dims, const std::vector<double>& weights) {
  if (weights.empty()) throw InvalidArgument("z needs at least one weight");
  double sum = 0.0;
  for (double p : weights) {
    if (!(p > 0.0)) throw InvalidArgument("z weights must be strictly positive");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw InvalidArgument("z weights must sum to 1");
  require_min_dim(dims, weights.size(), "z");
  const Shape shape(dims);
  Vector amps = zeros(shape);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const std::vector<std::size_t> idx(dims.size(), i);
    amps(static_cast<Eigen::Index>(shape.flat_index(idx))) = std::sqrt(weights[i]);
  }
  return StateTensor(shape, std::move(amps));
}

StateTensor u_state() {
  const Shape shape({2, 2, 2});
  Vector amps = zeros(shape);
  for (std::size_t k : {0, 1}) {
    const std::size_t idx[] = {k, k, 0};
    amps(static_cast<Eigen::Index>(shape.flat_index(idx))) = 1.0;
  }
  return StateTensor(shape, std::move(amps));
}

StateTensor v_state() {
  const Shape shape({2, 4, 2});
  Vector amps = zeros(shape);
  const std::size_t terms[4][3] = {{0, 0, 0}, {1, 1, 0}, {0, 2, 1}, {1, 3, 1}};
  for (const auto& t : terms) amps(static_cast<Eigen::Index>(shape.flat_index(t))) = 1.0;
  return StateTensor(shape, std::move(amps));
}

StateTensor x_state() {
  const Shape shape({4, 4, 4});
  Vector amps = zeros(shape);
  // Bell pair bits: ab (parties 0-1), bc (1-2), ca (2-0).
  for (std::size_t ab = 0; ab < 2; ++ab) {
    for (std::size_t bc = 0; bc < 2; ++bc) {
      for (std::size_t ca = 0; ca < 2; ++ca) {
        const std::size_t idx[] = {2 * ca + ab, 2 * ab + bc, 2 * bc + ca};
        amps(static_cast<Eigen::Index>(shape.flat_index(idx))) = 1.0;
      }
    }
  }
  return StateTensor(shape, std::move(amps));
}

StateTensor random_state(std::vector<std::size_t> dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Shape shape(std::move(dims));
  return StateTensor(shape, gaussian_vector(shape.total(), rng));
}

StateTensor random_product_state(std::vector<std::size_t> dims, std::uint64_t seed) {
  if (dims.empty()) throw InvalidArgument("product needs at least one subsystem");
  std::mt19937_64 rng(seed);
  std::optional<StateTensor> acc;
  for (std::size_t d : dims) {
    StateTensor site({d}, gaussian_vector(d, rng));
    acc = acc ? tensor_compose(*acc, site) : site;
  }
  return *acc;
}

StateTensor dress_with_local_unitaries(const StateTensor& state, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0xd3e55ed0c0ffeeULL);
  Vector amps = state.amps();
  for (std::size_t n = 0; n < state.num_subsystems(); ++n) {
    amps = apply_local_operator(state.shape(), amps, n, random_unitary(state.dim(n), rng));
  }
  return StateTensor(state.shape(), std::move(amps));
}

std::vector<double> random_weights(std::size_t k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.1, 1.0);
  std::vector<double> w(k);
  for (double& x : w) x = uni(rng);
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= sum;
  return w;
}

StateTensor random_branched_state(std::vector<std::size_t> dims, std::size_t k,
                                  std::uint64_t seed) {
  if (k == 0) throw InvalidArgument("need at least one branch");
  require_min_dim(dims, k, "branched state");
  std::mt19937_64 rng(seed);
  const Shape shape(dims);
  const std::vector<double> p = random_weights(k, seed ^ 0x77ULL);
  Vector amps = zeros(shape);
  // Block i of subsystem n is [lo, hi) of a near-even split of dims[n].
  auto block = [&](std::size_t n, std::size_t i) {
    const std::size_t lo = i * dims[n] / k;
    const std::size_t hi = (i + 1) * dims[n] / k;
    return std::pair{lo, hi};
  };
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t i = 0; i < k; ++i) {
    Vector branch = zeros(shape);
    for (std::size_t flat = 0; flat < shape.total(); ++flat) {
      const auto idx = shape.multi_index(flat);
      bool inside = true;
      for (std::size_t n = 0; n < dims.size() && inside; ++n) {
        const auto [lo, hi] = block(n, i);
        inside = idx[n] >= lo && idx[n] < hi;
      }
      if (inside) branch(static_cast<Eigen::Index>(flat)) = Complex(gauss(rng), gauss(rng));
    }
    amps += std::sqrt(p[i]) * branch.normalized();
  }
  return StateTensor(shape, std::move(amps));
}

namespace {

StateTensor fixed_layout(const StateSpec& spec, StateTensor state) {
  if (spec.parties != 3 || (!spec.dims.empty() && spec.dims != state.dims())) {
    throw InvalidArgument(std::string(to_string(spec.kind)) + " has a fixed three-party layout");
  }
  return state;
}

}  // namespace

StateTensor generate(const StateSpec& spec) {
  const auto dims = spec.effective_dims();
  switch (spec.kind) {
    case StateKind::ghz: return ghz_state(dims);
    case StateKind::w: return w_state(dims);
    case StateKind::z: return z_state(dims, spec.weights);
    case StateKind::u: return fixed_layout(spec, u_state());
    case StateKind::v: return fixed_layout(spec, v_state());
    case StateKind::x: return fixed_layout(spec, x_state());
    case StateKind::product: return random_product_state(dims, spec.seed);
    case StateKind::random: return random_state(dims, spec.seed);
    case StateKind::random_local_dressing: {
      if (spec.base == StateKind::random_local_dressing) {
        throw InvalidArgument("dressing base cannot itself be a dressing");
      }
      StateSpec base = spec;
      base.kind = spec.base;
      return dress_with_local_unitaries(generate(base), spec.seed);
    }
  }
  throw InvalidArgument("unknown state kind");
}

}  // namespace lodecomp

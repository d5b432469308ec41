#pragma once

// Generators for the named example states and seeded random families.
//
// Fixed layouts:
//   u : dims (2,2,2),  (|00> + |11>)|0> / sqrt2
//   v : dims (2,4,2),  [(|00> + |11>)|0> + (|02> + |13>)|1>] / 2
//   x : dims (4,4,4),  three Bell pairs, one per pair of parties. Party j
//       holds two qubits as local index 2*q_prev + q_next, where q_prev is
//       shared with party j-1 and q_next with party j+1 (mod 3).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "lodecomp/state.hpp"

namespace lodecomp {

enum class StateKind { ghz, w, z, u, v, x, product, random, random_local_dressing };

std::string_view to_string(StateKind kind);
std::optional<StateKind> parse_state_kind(std::string_view name);

struct StateSpec {
  StateKind kind = StateKind::ghz;
  std::size_t parties = 3;         // N, when dims is empty
  std::size_t local_dim = 2;       // d, when dims is empty
  std::vector<std::size_t> dims;   // explicit per-subsystem dims (optional)
  std::vector<double> weights;     // z only: branch weights p_i
  std::uint64_t seed = 0;          // random kinds
  StateKind base = StateKind::z;   // random_local_dressing: state to dress

  std::vector<std::size_t> effective_dims() const;
};

/// Throws InvalidArgument for inconsistent specs.
StateTensor generate(const StateSpec& spec);

StateTensor ghz_state(std::vector<std::size_t> dims);
StateTensor w_state(std::vector<std::size_t> dims);
/// sum_i sqrt(p_i) |i>^{(x)N}
StateTensor z_state(std::vector<std::size_t> dims, const std::vector<double>& weights);
StateTensor u_state();
StateTensor v_state();
StateTensor x_state();
StateTensor random_state(std::vector<std::size_t> dims, std::uint64_t seed);
StateTensor random_product_state(std::vector<std::size_t> dims, std::uint64_t seed);

/// Applies a seeded Haar-random unitary to every subsystem.
StateTensor dress_with_local_unitaries(const StateTensor& state, std::uint64_t seed);

/// Random state with k planted branches: each subsystem's basis is cut into k
/// contiguous blocks and branch i is a random state on the i-th blocks,
/// weighted by a random probability vector.
StateTensor random_branched_state(std::vector<std::size_t> dims, std::size_t k,
                                  std::uint64_t seed);

/// Random probability vector of length k with entries bounded away from 0.
std::vector<double> random_weights(std::size_t k, std::uint64_t seed);

}  // namespace lodecomp

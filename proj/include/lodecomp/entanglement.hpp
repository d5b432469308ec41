#pragma once

// Global (all-party) entanglement from the maximal LO decomposition, plus
// the unitary transformations used to probe its invariances.

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "lodecomp/maximal.hpp"
#include "lodecomp/state.hpp"

namespace lodecomp {

enum class EntropyUnit { bits, nats };

struct EntropyReport {
  std::vector<double> weights;  // descending
  double entropy_bits = 0.0;
  std::size_t branch_count = 0;
  bool degenerate_spectrum = false;
  bool non_unique = false;
  ConstructionPath path = ConstructionPath::eigenvector_graph;

  double entropy(EntropyUnit unit) const;
};

/// Shannon entropy of a probability list, with 0 log 0 = 0.
double shannon_entropy(std::span<const double> p, EntropyUnit unit = EntropyUnit::bits);

EntropyReport entropy_report(const MaximalResult& result);
/// E_LO: Shannon entropy of the maximal decomposition's branch weights.
EntropyReport e_lo(const StateTensor& state, const MaximalOptions& options = {});

/// Throws InvalidArgument unless U is square and unitary within 1e-10.
void require_unitary(const Matrix& u);

StateTensor apply_local_unitary(const StateTensor& state, std::size_t n, const Matrix& u);
/// U acts on H^(n) (x) H^(m) with pair index i_n * d_m + i_m.
StateTensor apply_pairwise_unitary(const StateTensor& state, std::size_t n, std::size_t m,
                                   const Matrix& u);

/// Haar-distributed unitary (QR of a complex Gaussian matrix, phases fixed).
Matrix random_unitary(std::size_t d, std::mt19937_64& rng);

/// Hadamard-type unitary on H^(n) (x) H^(m) (dims dn, dm) that mixes
/// |i>|i> with |k+i>|k+i> for every branch i < k and is the identity
/// elsewhere. Needs dn, dm >= 2k.
Matrix singlet_creating_unitary(std::size_t dn, std::size_t dm, std::size_t k);

/// Random unitary on H^(n) (x) H^(m) that is block-diagonal with respect to
/// the products block_n[i] (x) block_m[i] and the identity on their
/// complement. Blocks are lists of computational basis indices.
Matrix random_block_aligned_unitary(std::size_t dn, std::size_t dm,
                                    const std::vector<std::vector<std::size_t>>& blocks_n,
                                    const std::vector<std::vector<std::size_t>>& blocks_m,
                                    std::mt19937_64& rng);

}  // namespace lodecomp

#pragma once

// Locally-orthogonal (LO) branch decompositions and their algebra.
//
// A decomposition writes |psi> = sum_i sqrt(p_i) |psi_i> where, on every
// subsystem n, branch i is supported on a subspace H_i^(n) and the H_i^(n)
// for different i are mutually orthogonal.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lodecomp/state.hpp"
#include "lodecomp/tolerances.hpp"

namespace lodecomp {

struct Branch {
  double weight = 0.0;          // p_i
  Vector vector;                // normalized |psi_i>
  std::vector<Matrix> supports;  // per subsystem, orthonormal basis of H_i^(n)
};

/// Partition of a subsystem's space into orthonormal blocks.
using SubspacePartition = std::vector<Matrix>;

class BranchDecomposition {
 public:
  /// Checks structure only (counts and sizes); LO validity is verify_lo's job.
  BranchDecomposition(StateTensor state, std::vector<Branch> branches);

  const StateTensor& state() const { return state_; }
  const Shape& shape() const { return state_.shape(); }
  const std::vector<Branch>& branches() const { return branches_; }
  const Branch& branch(std::size_t i) const { return branches_.at(i); }
  std::size_t size() const { return branches_.size(); }

  std::vector<double> weights() const;
  /// Q_i^(n) as a d_n x d_n matrix.
  Matrix support_projector(std::size_t i, std::size_t n) const;

 private:
  StateTensor state_;
  std::vector<Branch> branches_;
};

struct VerificationCheck {
  std::string name;
  double residual = 0.0;  // worst violation magnitude
  double tolerance = 0.0;
  bool passed = false;
};

struct VerificationReport {
  bool passed = true;
  std::vector<VerificationCheck> checks;

  const VerificationCheck* find(const std::string& name) const;
  std::string render() const;
};

/// Checks every LO invariant of `d` and reports residuals; never throws on
/// an invalid decomposition.
VerificationReport verify_lo(const BranchDecomposition& d, double tol = 1e-9);

/// Builds a branch from an unnormalized component sqrt(p) |psi_i>; supports
/// are the supports of the branch's reduced states.
Branch make_branch(const Shape& shape, const Vector& component, const Tolerances& tol = {});

/// Orders branches by descending weight; weights equal within 1e-9 are
/// ordered by the lowest computational index touched by each support,
/// subsystem 0 first.
void sort_branches(std::vector<Branch>& branches);

/// Merges branches class by class. Output branch j is the sum over merge[j].
BranchDecomposition coarse_grain(const BranchDecomposition& d,
                                 const std::vector<std::vector<std::size_t>>& merge);

/// Joint refinement of two LO decompositions of the same state (N > 2).
/// Branches are the non-vanishing sqrt(p~_k) Q_i |psi~_k> = sqrt(p_i) Q~_k |psi_i>;
/// both sides are computed and must agree within `route_tol`.
BranchDecomposition common_fine_graining(const BranchDecomposition& d1,
                                         const BranchDecomposition& d2,
                                         const Tolerances& tol = {},
                                         double route_tol = 1e-9);

/// Largest discrepancy between the two evaluation routes of the common
/// fine-graining, over all (k, i) pairs.
double fine_graining_route_gap(const BranchDecomposition& d1, const BranchDecomposition& d2);

/// If `coarse` is a coarse-graining of `fine`, returns for every fine branch
/// the index of the coarse branch containing it.
std::optional<std::vector<std::size_t>> coarse_graining_map(const BranchDecomposition& fine,
                                                            const BranchDecomposition& coarse,
                                                            double tol = 1e-8);

/// Same branches (matched by overlap) with equal components and support
/// projectors within `tol`.
bool equivalent(const BranchDecomposition& a, const BranchDecomposition& b, double tol = 1e-8);

}  // namespace lodecomp

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "phs/linalg.hpp"
#include "phs/model.hpp"

namespace phs::oracle {

// Brute-force route to the contraction test: restrict the boundary form
// u*P1u − y*P1y to ker W̃_B and look at its spectrum. Shares no code path
// with compute_wb / check_contraction.

struct KernelBasis {
  ComplexMatrix basis;  // 2n × k, orthonormal columns
  int dim = 0;
};

/// Orthonormal basis of ker m from the right singular vectors whose singular
/// values fall below tol_rank·σ_max (all of them if m = 0).
KernelBasis kernel_basis(const ComplexMatrix& m, double tol_rank = Tolerances{}.rank);

struct BoundaryFormExtremes {
  double max_value = 0.0;  // normalized by ‖P1‖
  double min_value = 0.0;  // normalized by ‖P1‖
  int kernel_dim = 0;
};

/// Extreme eigenvalues of F = B*·diag(P1, −P1)·B with B an orthonormal basis
/// of ker W̃_B. Both are 0 when the kernel is trivial.
BoundaryFormExtremes boundary_form_on_kernel(const PHSystem& system, const Tolerances& tol = {});

struct OracleContraction {
  bool passes = false;
  double re_p0_max_eigenvalue = 0.0;  // normalized by max(1,‖P0‖)
  BoundaryFormExtremes form;
  /// When the test passes the kernel must be exactly n-dimensional.
  bool rank_implication_holds = true;
};

/// Re P0 ≤ 0 and the boundary form is negative semidefinite on ker W̃_B.
OracleContraction check_contraction_via_c(const PHSystem& system, const Tolerances& tol = {});

/// Largest value of the boundary form over `samples` random unit vectors of
/// the kernel; a lower bound for `boundary_form_on_kernel(...).max_value`.
double sampled_boundary_form_max(const PHSystem& system, std::mt19937_64& rng, int samples,
                                 const Tolerances& tol = {});

enum class ClassHint { contraction, unitary, general };

ClassHint class_hint_from_string(const std::string& name);
std::string to_string(ClassHint hint);

/// Reproducible random system with a constant Hamiltonian density.
///
/// The boundary matrix is built through W_B = M·[I+V, I−V] followed by
/// W̃_B = W_B·[P1 −P1; I I], with M random and well conditioned:
///   unitary      V unitary, P0 skew-Hermitian;
///   contraction  ‖V‖ ≤ 0.95, λ_max(Re P0) ≤ −0.05;
///   general      either an unstructured W̃_B or ‖V‖ ∈ (0, 2), and a P0
///                whose Hermitian part has λ_max uniform in (−1, 1).
PHSystem random_system(std::uint64_t seed, int n, ClassHint hint);

/// Random Hermitian positive definite field of dimension n; `variant` picks
/// constant (0), quadratic polynomial (1) or an 8-node grid (2).
CoefficientField random_field(std::uint64_t seed, Eigen::Index n, int variant);

struct CampaignInstance {
  std::uint64_t seed = 0;
  ClassHint hint = ClassHint::general;
  bool classifier = false;
  bool oracle = false;
  bool frontier = false;
  double classifier_witness = 0.0;
  double oracle_witness = 0.0;
  double re_p0_witness = 0.0;
};

struct CampaignReport {
  int n = 0;
  int count = 0;
  std::uint64_t seed = 0;
  int agreements = 0;
  int disagreements = 0;          // among non-frontier instances
  int frontier = 0;
  int frontier_disagreements = 0;
  int rank_implication_failures = 0;
  int contraction_instances = 0;
  std::vector<CampaignInstance> logged;  // frontier and disagreeing instances

  double frontier_fraction() const { return count ? static_cast<double>(frontier) / count : 0.0; }
};

/// Compares check_contraction (matrix condition on W_B) with
/// check_contraction_via_c on `count` systems of size n, alternating the
/// general and contraction hints. An instance is on the frontier when any
/// normalized witness is within 10·tol.psd of zero.
CampaignReport run_agreement_campaign(int n, int count, std::uint64_t seed,
                                      const Tolerances& tol = {});

nlohmann::json to_json(const CampaignReport& report);

}  // namespace phs::oracle

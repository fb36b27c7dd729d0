#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "phs/linalg.hpp"
#include "phs/model.hpp"

namespace phs {

// Matrix tests deciding whether AH generates a contraction semigroup, a
// unitary group, or a C0-semigroup.
//
// Sign conventions: positive eigenvalues of P1·H transport leftward (their
// inflow boundary is ζ=1), negative ones rightward (inflow at ζ=0).
//
// PSD decisions compare witnesses normalized by their natural scale against
// Tolerances::psd:
//   Re P0           scale max(1, ‖P0‖)
//   W_B Σ W_B*      scale ‖W_B‖²   (invariant under W̃_B -> c·W̃_B)

/// W_B = W̃_B · [P1 −P1; I I]⁻¹ (n × 2n). Throws SingularityError if the
/// block matrix is numerically singular.
ComplexMatrix compute_wb(const PHSystem& system);

/// Σ = [0 I; I 0] of size 2n.
ComplexMatrix sigma(Eigen::Index n);

/// Number of singular values ≥ tol_rank·σ_max (0 for the zero matrix).
int rank_of(const ComplexMatrix& m, double tol_rank = Tolerances{}.rank);

struct Inertia {
  int positive = 0;
  int negative = 0;
  int zero = 0;
  friend bool operator==(const Inertia&, const Inertia&) = default;
};

/// Eigenvalue sign counts of a Hermitian matrix; eigenvalues within
/// ±tol.eig·max(1,‖m‖) count as zero. Throws ShapeError if m is not Hermitian.
Inertia inertia(const ComplexMatrix& m, const Tolerances& tol = {});

/// Diagonalization of P1·H(ζ) at one point.
struct EigenSplit {
  double zeta = 0.0;
  int n1 = 0;
  int n2 = 0;
  RealVector lambda;   // positive eigenvalues, descending
  RealVector theta;    // negative eigenvalues, most negative first
  ComplexMatrix s_inv; // eigenvectors of P1·H(ζ); positive columns first
  ComplexMatrix z_plus;
  ComplexMatrix z_minus;

  /// diag(lambda, theta).
  RealVector speeds() const;
};

/// Eigenvectors are obtained from the Hermitian problem
/// H^{1/2} P1 H^{1/2} = Q D Q* and mapped back as S⁻¹ = H^{-1/2} Q. Columns of
/// Q are phase-fixed (first significant entry real positive). Throws
/// ValidationError if an eigenvalue is numerically zero or the inertia differs
/// from that of P1.
EigenSplit eigensplit(const PHSystem& system, double zeta, const Tolerances& tol = {});

struct FieldDiagonalization {
  std::vector<EigenSplit> splits;
  /// Largest ‖column_k+1 − column_k‖ of the (aligned) eigenvector matrices.
  double max_column_jump = 0.0;
  bool crossing = false;
  std::vector<std::string> warnings;
};

/// Eigensplits along a strictly increasing grid in [0,1] with eigenvector
/// continuity enforced: each cluster of equal eigenvalues at point k+1 is
/// rotated (unitary Procrustes; a phase for simple eigenvalues) to best match
/// point k. A crossing of eigenvalue branches is reported in `warnings` and
/// `crossing`, not thrown.
FieldDiagonalization diagonalize_field(const PHSystem& system, std::span<const double> grid,
                                       const Tolerances& tol = {});

/// Uniform grid of `points` nodes on [0,1].
std::vector<double> uniform_grid(int points);

/// Blocks of the boundary closure built from the eigenvector matrices at the
/// two endpoints: W1·H(1)·S⁻¹(1) = [V1 V2], W0·H(0)·S⁻¹(0) = [U1 U2],
/// K = [V1 U2].
struct BoundaryClosure {
  ComplexMatrix w1, w0;
  ComplexMatrix v1, v2;
  ComplexMatrix u1, u2;
  ComplexMatrix k;
};

/// When `use_orthonormal_bases` is set the Z± bases replace the eigenvector
/// columns (the closure then only spans the right subspaces; its
/// invertibility is unchanged).
BoundaryClosure boundary_closure(const PHSystem& system, const EigenSplit& at0,
                                 const EigenSplit& at1, bool use_orthonormal_bases = true);

struct DirectSumResult {
  bool generates = false;
  double min_singular_value = 0.0;
  double max_singular_value = 0.0;
  ComplexMatrix k;
};

/// W1·H(1)·Z⁺(1) ⊕ W0·H(0)·Z⁻(0) = Cⁿ, tested as σ_min(K) ≥ tol.rank·σ_max(K).
/// Throws PreconditionError when rank W̃_B ≠ n.
DirectSumResult direct_sum_check(const PHSystem& system, const Tolerances& tol = {});

struct ContractionCheck {
  int rank_wb_tilde = 0;
  bool rank_full = false;
  double re_p0_max_eigenvalue = 0.0;  // normalized by max(1,‖P0‖)
  bool re_p0_nsd = false;
  ComplexMatrix sigma_form;           // W_B Σ W_B*
  double sigma_form_min_eigenvalue = 0.0;  // normalized by ‖W_B‖²
  double sigma_form_max_eigenvalue = 0.0;  // normalized by ‖W_B‖²
  bool sigma_form_psd = false;
  bool passes = false;
};

/// Re P0 ≤ 0, W_B Σ W_B* ≥ 0 and rank W̃_B = n.
ContractionCheck check_contraction(const PHSystem& system, const Tolerances& tol = {});

struct UnitaryCheck {
  double re_p0_norm = 0.0;      // normalized by max(1,‖P0‖)
  double sigma_form_norm = 0.0; // normalized by ‖W_B‖²
  int rank_wb_tilde = 0;
  bool passes = false;
};

/// Re P0 = 0, W_B Σ W_B* = 0 and rank W̃_B = n.
UnitaryCheck check_unitary(const PHSystem& system, const Tolerances& tol = {});

enum class GenerationStatus { generator, not_generator, inconclusive };

struct Verdict {
  int n = 0;
  int rank_wb_tilde = 0;
  Inertia p1_inertia;
  bool re_p0_nsd = false;
  double re_p0_max_eigenvalue = 0.0;
  ComplexMatrix sigma_form;
  double sigma_form_min_eigenvalue = 0.0;
  bool contraction = false;
  bool unitary_group = false;
  GenerationStatus c0 = GenerationStatus::inconclusive;
  double direct_sum_min_singular_value = 0.0;
  double direct_sum_max_singular_value = 0.0;
  double max_column_jump = 0.0;
  std::vector<std::string> warnings;
  std::vector<std::string> notes;

  /// nullopt when inconclusive.
  std::optional<bool> c0_semigroup() const;
  /// False if unitary ∧ ¬contraction or contraction ∧ c0 = not_generator.
  bool monotone() const;
};

struct ClassifyOptions {
  Tolerances tol{};
  /// Points of the uniform grid used to look for eigenvalue crossings.
  int grid_points = 65;
};

/// Runs the unitary, contraction and direct-sum tests. A rank-deficient W̃_B
/// yields c0 = inconclusive (and contraction = false). Monotonicity
/// violations are reported in `notes` as InternalInconsistency, the raw
/// booleans are kept.
Verdict classify(const PHSystem& system, const ClassifyOptions& options = {});

std::string to_string(GenerationStatus status);

/// JSON report; the schema is documented in docs/report_schema.md.
nlohmann::json to_json(const Verdict& verdict);

}  // namespace phs

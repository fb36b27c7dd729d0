#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "phs/linalg.hpp"

namespace phs {

/// Hamiltonian density H(ζ) on [0,1].
///
/// Three representations are supported:
///   - constant: a single matrix;
///   - polynomial: H(ζ) = Σ_k C_k ζ^k with coefficient matrices C_k;
///   - grid: samples at strictly increasing nodes spanning [0,1], linearly
///     interpolated and then symmetrized as (M + M*)/2.
///
/// Only polynomial and constant fields are C¹; grid fields are continuous but
/// generally kinked at the nodes.
class CoefficientField {
 public:
  enum class Kind { constant, polynomial, grid };

  static CoefficientField constant(ComplexMatrix value);
  /// `coefficients[k]` multiplies ζ^k. At least one matrix is required.
  static CoefficientField polynomial(std::vector<ComplexMatrix> coefficients);
  /// `zetas` must be strictly increasing with zetas.front()==0, zetas.back()==1.
  static CoefficientField grid(std::vector<double> zetas, std::vector<ComplexMatrix> values);

  Kind kind() const { return kind_; }
  Eigen::Index dim() const { return dim_; }

  /// Throws DomainError outside [0,1].
  ComplexMatrix operator()(double zeta) const;

  /// True when the field does not depend on ζ.
  bool is_constant() const;

  /// Grid kind only: true when consecutive slopes differ, i.e. the
  /// interpolant is not C¹.
  bool has_kinks(double tol) const;

  const std::vector<ComplexMatrix>& matrices() const { return matrices_; }
  const std::vector<double>& zetas() const { return zetas_; }

 private:
  CoefficientField(Kind kind, std::vector<ComplexMatrix> matrices, std::vector<double> zetas);

  Kind kind_;
  Eigen::Index dim_ = 0;
  std::vector<ComplexMatrix> matrices_;
  std::vector<double> zetas_;
};

/// Validation settings: the sample count m of the uniform grid
/// {0, 1/(m−1), …, 1} and the tolerances applied on it.
struct ValidationOptions {
  int sample_count = 257;
  Tolerances tol{};
};

/// The tuple (n, P₁, P₀, H, W̃_B) of ∂ₜx = (P₁∂_ζ + P₀)(Hx) with boundary
/// condition W̃_B [(Hx)(1); (Hx)(0)] = 0. Instances are immutable and always
/// validated.
class PHSystem {
 public:
  /// Validates every invariant; throws ValidationError naming the first
  /// violated one (and the ζ where it fails for field checks).
  static PHSystem create(ComplexMatrix p1, ComplexMatrix p0, CoefficientField h,
                         ComplexMatrix wb_tilde, const ValidationOptions& options = {});

  Eigen::Index n() const { return p1_.rows(); }
  const ComplexMatrix& p1() const { return p1_; }
  const ComplexMatrix& p0() const { return p0_; }
  const CoefficientField& h() const { return h_; }
  const ComplexMatrix& wb_tilde() const { return wb_tilde_; }

  /// Same system with a different Hamiltonian density (revalidated).
  PHSystem with_h(CoefficientField h, const ValidationOptions& options = {}) const;
  /// Same system with a different boundary matrix (revalidated).
  PHSystem with_wb_tilde(ComplexMatrix wb_tilde, const ValidationOptions& options = {}) const;

 private:
  PHSystem(ComplexMatrix p1, ComplexMatrix p0, CoefficientField h, ComplexMatrix wb_tilde);

  ComplexMatrix p1_;
  ComplexMatrix p0_;
  CoefficientField h_;
  ComplexMatrix wb_tilde_;
};

/// Parses and validates a model document. Throws SchemaError for malformed
/// documents and ValidationError for invariant violations.
PHSystem load_system(const nlohmann::json& document, const ValidationOptions& options = {});
PHSystem load_system_file(const std::filesystem::path& path, const ValidationOptions& options = {});

/// Serializes to the model document format accepted by load_system.
nlohmann::json to_json(const PHSystem& system);

ComplexMatrix eval_h(const PHSystem& system, double zeta);

/// (m + m*)/2; throws ShapeError for non-square input.
ComplexMatrix hermitian_part(const ComplexMatrix& m);

namespace json_io {
/// Complex scalars are [re, im] pairs; plain numbers are accepted on input.
nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j, const std::string& what);
}  // namespace json_io

}  // namespace phs

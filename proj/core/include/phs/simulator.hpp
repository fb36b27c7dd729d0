#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "phs/classifier.hpp"
#include "phs/linalg.hpp"
#include "phs/model.hpp"

namespace phs::sim {

// Upwind finite differences in Riemann invariants g = S(ζ)x, where the
// columns of S⁻¹(ζ) are eigenvectors of P1·H(ζ):
//
//   ∂t g = ∂ζ(Δ g) + B g,   B = S (dS⁻¹/dζ) Δ + S P0 H S⁻¹,   Δ = diag(Λ, Θ).
//
// Components with positive speed move left: forward differences, inflow at
// ζ=1. Negative speeds move right: backward differences, inflow at ζ=0. The
// incoming traces g₊(1), g₋(0) are solved every stage from
//   [V1 U2][g₊(1); g₋(0)] = −[U1 V2][g₊(0); g₋(1)],
// which is W̃_B [(Hx)(1); (Hx)(0)] = 0 written in g.

enum class TimeScheme {
  forward_euler,  // default; least numerical dissipation at cfl near 1
  ssp_rk2,        // Heun, two-stage strong-stability preserving
};

struct SimConfig {
  int nx = 256;
  double t_final = 1.0;
  double cfl = 0.9;
  std::vector<double> p_norms{1.0, 2.0};
  int record_every = 1;
  TimeScheme scheme = TimeScheme::forward_euler;
  bool allow_illposed = false;
  double blowup_factor = 1e6;
  Tolerances tol{};
};

/// x₀(ζ) sampled at the grid nodes; must return a vector of length n.
using InitialField = std::function<ComplexVector(double)>;

struct NormSample {
  double t = 0.0;
  double energy = 0.0;
  std::vector<double> lp;  // one entry per SimConfig::p_norms
};

struct SimState {
  double t = 0.0;
  long steps = 0;
  ComplexMatrix g;  // n × (nx+1), column i is the node ζ_i = i/nx
  double initial_max = 0.0;
  std::vector<NormSample> history;
};

/// Precomputed, immutable discretization of one system on one grid.
class Simulator {
 public:
  /// Throws IllPosedError when the direct-sum test fails (or is inconclusive)
  /// and allow_illposed is unset, ContinuityError when eigenvalue branches
  /// cross on the grid, DomainError for a bad configuration.
  Simulator(const PHSystem& system, SimConfig config);

  /// g(ζᵢ) = S(ζᵢ) x₀(ζᵢ); records the t=0 sample.
  SimState initial_state(const InitialField& x0) const;

  /// One explicit step of size min(dt, t_final − t). Throws StabilityError on
  /// blow-up, DomainError if t ≥ t_final.
  SimState step(SimState state) const;

  /// Steps until t_final.
  SimState run(SimState state) const;

  /// Trapezoid ∫ x* H x dζ.
  double energy(const SimState& state) const;
  /// (Σᵢ wᵢ Σ_c |x_c(ζᵢ)|^p)^{1/p}, trapezoid weights wᵢ.
  double lp_norm(const SimState& state, double p) const;
  /// x = S⁻¹ g at every node (n × (nx+1)).
  ComplexMatrix field(const SimState& state) const;
  /// ‖W̃_B [(Hx)(1); (Hx)(0)]‖ / (‖W̃_B‖·‖[(Hx)(1); (Hx)(0)]‖).
  double boundary_residual(const SimState& state) const;

  double dt() const { return dt_; }
  double dzeta() const { return h_; }
  double max_speed() const { return max_speed_; }
  /// dt·max|speed|/Δζ.
  double cfl_number() const { return dt_ * max_speed_ / h_; }
  const std::vector<double>& grid() const { return grid_; }
  const SimConfig& config() const { return config_; }
  const ComplexMatrix& closure_matrix() const { return k_; }
  int n1() const { return n1_; }

 private:
  ComplexMatrix rhs(const ComplexMatrix& g) const;
  void close(ComplexMatrix& g) const;
  NormSample sample(const SimState& state) const;
  double weight(Eigen::Index i) const;

  SimConfig config_;
  Eigen::Index n_ = 0;
  int n1_ = 0;
  int n2_ = 0;
  double h_ = 0.0;
  double dt_ = 0.0;
  double max_speed_ = 0.0;
  std::vector<double> grid_;
  Eigen::MatrixXd speeds_;            // n × (nx+1)
  std::vector<ComplexMatrix> s_inv_;  // per node
  std::vector<ComplexMatrix> s_;      // per node
  std::vector<ComplexMatrix> h_nodes_;
  std::vector<ComplexMatrix> lower_;  // B per node
  bool has_lower_ = false;
  ComplexMatrix wb_tilde_;
  ComplexMatrix k_;                   // [V1 U2]
  ComplexMatrix outgoing_;            // [U1 V2]
  Eigen::PartialPivLU<ComplexMatrix> k_lu_;
  Eigen::CompleteOrthogonalDecomposition<ComplexMatrix> k_cod_;
  bool k_invertible_ = true;
};

struct SimResult {
  std::vector<NormSample> history;
  std::vector<double> grid;
  ComplexMatrix final_field;
  double dt = 0.0;
  long steps = 0;
  double max_boundary_residual = 0.0;
};

/// setup + run, tracking the boundary residual after every step.
SimResult run(const PHSystem& system, const SimConfig& config, const InitialField& x0);

/// `t,energy,l<p>...` with one row per recorded sample.
void write_history_csv(std::ostream& os, const std::vector<NormSample>& history,
                       const std::vector<double>& p_norms);
/// `zeta,re(x_1),im(x_1),...` with one row per node.
void write_field_csv(std::ostream& os, const std::vector<double>& grid, const ComplexMatrix& field);

}  // namespace phs::sim

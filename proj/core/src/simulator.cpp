#include "phs/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "phs/errors.hpp"

namespace phs::sim {

Simulator::Simulator(const PHSystem& system, SimConfig config) : config_(std::move(config)) {
  if (config_.nx < 16) throw DomainError("nx must be at least 16");
  if (!(config_.t_final > 0.0)) throw DomainError("t_final must be positive");
  if (!(config_.cfl > 0.0 && config_.cfl <= 1.0)) throw DomainError("cfl must lie in (0,1]");
  if (config_.record_every < 1) throw DomainError("record_every must be at least 1");
  for (double p : config_.p_norms)
    if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("p-norms must lie in [1,inf)");

  const Tolerances& tol = config_.tol;
  n_ = system.n();
  wb_tilde_ = system.wb_tilde();

  bool generator = false;
  try {
    generator = direct_sum_check(system, tol).generates;
  } catch (const PreconditionError&) {
    generator = false;
  }
  if (!generator && !config_.allow_illposed)
    throw IllPosedError("the operator does not generate a C0-semigroup (direct-sum test fails); "
                        "pass allow_illposed to simulate anyway");

  const int nodes = config_.nx + 1;
  h_ = 1.0 / config_.nx;
  grid_ = uniform_grid(nodes);
  FieldDiagonalization fd = diagonalize_field(system, grid_, tol);
  if (fd.crossing)
    throw ContinuityError(fd.warnings.empty() ? std::string("eigenvalue crossing on the grid")
                                              : fd.warnings.front());

  n1_ = fd.splits.front().n1;
  n2_ = fd.splits.front().n2;
  speeds_.resize(n_, nodes);
  s_inv_.reserve(nodes);
  s_.reserve(nodes);
  h_nodes_.reserve(nodes);
  for (int i = 0; i < nodes; ++i) {
    const EigenSplit& sp = fd.splits[static_cast<std::size_t>(i)];
    speeds_.col(i) = sp.speeds();
    s_inv_.push_back(sp.s_inv);
    s_.push_back(sp.s_inv.partialPivLu().inverse());
    h_nodes_.push_back(system.h()(grid_[static_cast<std::size_t>(i)]));
  }
  max_speed_ = speeds_.cwiseAbs().maxCoeff();
  dt_ = config_.cfl * h_ / max_speed_;

  // Lower-order operator B = S (dS⁻¹/dζ) Δ + S P0 H S⁻¹.
  const bool constant_field = system.h().is_constant();
  lower_.reserve(nodes);
  for (int i = 0; i < nodes; ++i) {
    const auto iu = static_cast<std::size_t>(i);
    ComplexMatrix b = s_[iu] * system.p0() * h_nodes_[iu] * s_inv_[iu];
    if (!constant_field) {
      const std::size_t lo = i == 0 ? 0 : iu - 1;
      const std::size_t hi = i == nodes - 1 ? iu : iu + 1;
      const ComplexMatrix ds_inv = (s_inv_[hi] - s_inv_[lo]) / (grid_[hi] - grid_[lo]);
      b += s_[iu] * ds_inv * speeds_.col(i).cast<Complex>().asDiagonal();
    }
    has_lower_ = has_lower_ || !b.isZero(0.0);
    lower_.push_back(std::move(b));
  }

  const BoundaryClosure closure =
      boundary_closure(system, fd.splits.front(), fd.splits.back(), /*use_orthonormal_bases=*/false);
  k_ = closure.k;
  outgoing_.resize(n_, n_);
  outgoing_ << closure.u1, closure.v2;
  k_lu_.compute(k_);
  k_invertible_ = generator;
  if (!k_invertible_) k_cod_.compute(k_);
}

double Simulator::weight(Eigen::Index i) const {
  return (i == 0 || i == config_.nx) ? 0.5 * h_ : h_;
}

ComplexMatrix Simulator::field(const SimState& state) const {
  ComplexMatrix x(n_, state.g.cols());
  for (Eigen::Index i = 0; i < state.g.cols(); ++i)
    x.col(i) = s_inv_[static_cast<std::size_t>(i)] * state.g.col(i);
  return x;
}

double Simulator::energy(const SimState& state) const {
  double e = 0.0;
  for (Eigen::Index i = 0; i < state.g.cols(); ++i) {
    const ComplexVector x = s_inv_[static_cast<std::size_t>(i)] * state.g.col(i);
    e += weight(i) * (x.adjoint() * h_nodes_[static_cast<std::size_t>(i)] * x)(0, 0).real();
  }
  return e;
}

double Simulator::lp_norm(const SimState& state, double p) const {
  const ComplexMatrix x = field(state);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    double node = 0.0;
    for (Eigen::Index c = 0; c < n_; ++c) node += std::pow(std::abs(x(c, i)), p);
    acc += weight(i) * node;
  }
  return std::pow(acc, 1.0 / p);
}

double Simulator::boundary_residual(const SimState& state) const {
  const Eigen::Index last = state.g.cols() - 1;
  ComplexVector traces(2 * n_);
  traces.head(n_) = h_nodes_.back() * s_inv_.back() * state.g.col(last);
  traces.tail(n_) = h_nodes_.front() * s_inv_.front() * state.g.col(0);
  const double r = (wb_tilde_ * traces).norm();
  const double denom = linalg::spectral_norm(wb_tilde_) * traces.norm();
  return denom > 0.0 ? r / denom : r;
}

ComplexMatrix Simulator::rhs(const ComplexMatrix& g) const {
  const Eigen::Index last = g.cols() - 1;
  const ComplexMatrix flux = g.cwiseProduct(speeds_.cast<Complex>());
  ComplexMatrix out = ComplexMatrix::Zero(n_, g.cols());
  const double inv_h = 1.0 / h_;
  if (n1_ > 0) {
    out.topLeftCorner(n1_, last) =
        (flux.block(0, 1, n1_, last) - flux.block(0, 0, n1_, last)) * inv_h;
  }
  if (n2_ > 0) {
    out.bottomRightCorner(n2_, last) =
        (flux.block(n1_, 1, n2_, last) - flux.block(n1_, 0, n2_, last)) * inv_h;
  }
  if (has_lower_) {
    for (Eigen::Index i = 0; i < g.cols(); ++i)
      out.col(i) += lower_[static_cast<std::size_t>(i)] * g.col(i);
  }
  return out;
}

void Simulator::close(ComplexMatrix& g) const {
  const Eigen::Index last = g.cols() - 1;
  ComplexVector known(n_);
  known.head(n1_) = g.col(0).head(n1_);
  known.tail(n2_) = g.col(last).tail(n2_);
  const ComplexVector rhs = -(outgoing_ * known);
  const ComplexVector incoming = k_invertible_ ? ComplexVector(k_lu_.solve(rhs))
                                               : ComplexVector(k_cod_.solve(rhs));
  g.col(last).head(n1_) = incoming.head(n1_);
  g.col(0).tail(n2_) = incoming.tail(n2_);
}

NormSample Simulator::sample(const SimState& state) const {
  NormSample s;
  s.t = state.t;
  s.energy = energy(state);
  for (double p : config_.p_norms) s.lp.push_back(lp_norm(state, p));
  return s;
}

SimState Simulator::initial_state(const InitialField& x0) const {
  SimState state;
  state.g.resize(n_, static_cast<Eigen::Index>(grid_.size()));
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    const ComplexVector x = x0(grid_[i]);
    if (x.size() != n_)
      throw DomainError("initial field returned " + std::to_string(x.size()) +
                        " components, expected " + std::to_string(n_));
    state.g.col(static_cast<Eigen::Index>(i)) = s_[i] * x;
  }
  state.initial_max = std::max(state.g.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  state.history.push_back(sample(state));
  return state;
}

SimState Simulator::step(SimState state) const {
  const double remaining = config_.t_final - state.t;
  if (!(remaining > 0.0)) throw DomainError("simulation already reached t_final");
  // Snap the final step onto t_final instead of leaving a sliver.
  const double dt = remaining <= dt_ * (1.0 + 1e-9) ? remaining : dt_;

  ComplexMatrix g1 = state.g + dt * rhs(state.g);
  close(g1);
  if (config_.scheme == TimeScheme::ssp_rk2) {
    ComplexMatrix g2 = 0.5 * state.g + 0.5 * (g1 + dt * rhs(g1));
    close(g2);
    g1 = std::move(g2);
  }
  state.g = std::move(g1);
  state.t = dt == remaining ? config_.t_final : state.t + dt;
  ++state.steps;

  const double peak = state.g.cwiseAbs().maxCoeff();
  if (!(peak <= config_.blowup_factor * state.initial_max)) {
    std::ostringstream os;
    os << "solution amplified beyond " << config_.blowup_factor << "x its initial maximum at t="
       << state.t;
    throw StabilityError(os.str());
  }

  const bool finished = state.t >= config_.t_final;
  if (finished || state.steps % config_.record_every == 0) state.history.push_back(sample(state));
  return state;
}

SimState Simulator::run(SimState state) const {
  while (state.t < config_.t_final) state = step(std::move(state));
  return state;
}

SimResult run(const PHSystem& system, const SimConfig& config, const InitialField& x0) {
  const Simulator sim(system, config);
  SimState state = sim.initial_state(x0);
  SimResult out;
  while (state.t < config.t_final) {
    state = sim.step(std::move(state));
    out.max_boundary_residual = std::max(out.max_boundary_residual, sim.boundary_residual(state));
  }
  out.history = std::move(state.history);
  out.grid = sim.grid();
  out.final_field = sim.field(state);
  out.dt = sim.dt();
  out.steps = state.steps;
  return out;
}

namespace {

std::string norm_label(double p) {
  std::ostringstream os;
  os << "l" << p;
  return os.str();
}

}  // namespace

void write_history_csv(std::ostream& os, const std::vector<NormSample>& history,
                       const std::vector<double>& p_norms) {
  os << "t,energy";
  for (double p : p_norms) os << ',' << norm_label(p);
  os << '\n';
  os.precision(17);
  for (const auto& s : history) {
    os << s.t << ',' << s.energy;
    for (double v : s.lp) os << ',' << v;
    os << '\n';
  }
}

void write_field_csv(std::ostream& os, const std::vector<double>& grid, const ComplexMatrix& field) {
  os << "zeta";
  for (Eigen::Index c = 0; c < field.rows(); ++c)
    os << ",re(x_" << c + 1 << "),im(x_" << c + 1 << ')';
  os << '\n';
  os.precision(17);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    os << grid[i];
    for (Eigen::Index c = 0; c < field.rows(); ++c) {
      const Complex v = field(c, static_cast<Eigen::Index>(i));
      os << ',' << v.real() << ',' << v.imag();
    }
    os << '\n';
  }
}

}  // namespace phs::sim

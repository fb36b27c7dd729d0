#include "phs/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "phs/errors.hpp"

namespace phs {

namespace {

// Eigensplit together with the unitary factor Q of the Hermitian problem and
// H(ζ)^{-1/2}, which diagonalize_field needs for alignment.
struct SplitWork {
  EigenSplit split;
  ComplexMatrix q;
  ComplexMatrix h_inv_sqrt;
  double scale = 1.0;
};

SplitWork eigensplit_work(const PHSystem& system, double zeta, const Tolerances& tol) {
  const Eigen::Index n = system.n();
  const ComplexMatrix h = system.h()(zeta);
  const linalg::SqrtPair roots = linalg::hermitian_sqrt(h);
  const ComplexMatrix m = hermitian_part(roots.sqrt * system.p1() * roots.sqrt);

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
  const RealVector& d = es.eigenvalues();
  const double scale = std::max(1.0, d.cwiseAbs().maxCoeff());

  std::vector<Eigen::Index> pos, neg;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(d(i)) <= tol.eig * scale)
      throw ValidationError("P1*H has a numerically zero eigenvalue at zeta=" +
                            std::to_string(zeta));
    (d(i) > 0 ? pos : neg).push_back(i);
  }
  // Ascending input: positives descending, negatives most-negative first.
  std::reverse(pos.begin(), pos.end());

  const Inertia p1_inertia = inertia(system.p1(), tol);
  if (static_cast<int>(pos.size()) != p1_inertia.positive ||
      static_cast<int>(neg.size()) != p1_inertia.negative)
    throw ValidationError("inertia of P1*H differs from inertia of P1 at zeta=" +
                          std::to_string(zeta));

  SplitWork w;
  w.scale = scale;
  w.h_inv_sqrt = roots.inv_sqrt;
  w.q.resize(n, n);
  EigenSplit& s = w.split;
  s.zeta = zeta;
  s.n1 = static_cast<int>(pos.size());
  s.n2 = static_cast<int>(neg.size());
  s.lambda.resize(s.n1);
  s.theta.resize(s.n2);
  Eigen::Index col = 0;
  for (std::size_t k = 0; k < pos.size(); ++k, ++col) {
    s.lambda(static_cast<Eigen::Index>(k)) = d(pos[k]);
    w.q.col(col) = es.eigenvectors().col(pos[k]);
  }
  for (std::size_t k = 0; k < neg.size(); ++k, ++col) {
    s.theta(static_cast<Eigen::Index>(k)) = d(neg[k]);
    w.q.col(col) = es.eigenvectors().col(neg[k]);
  }
  linalg::fix_column_phases(w.q);
  s.s_inv = roots.inv_sqrt * w.q;
  s.z_plus = linalg::orthonormal_columns(s.s_inv.leftCols(s.n1), tol.rank);
  s.z_minus = linalg::orthonormal_columns(s.s_inv.rightCols(s.n2), tol.rank);
  return w;
}

// Index ranges of (numerically) equal eigenvalues; speeds are sorted within
// each sign block so clusters are contiguous.
std::vector<std::pair<Eigen::Index, Eigen::Index>> eigenvalue_clusters(const RealVector& speeds,
                                                                       double tol) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
  Eigen::Index begin = 0;
  for (Eigen::Index i = 1; i <= speeds.size(); ++i) {
    if (i == speeds.size() || std::abs(speeds(i) - speeds(i - 1)) > tol) {
      out.emplace_back(begin, i - begin);
      begin = i;
    }
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

ComplexMatrix compute_wb(const PHSystem& system) {
  const Eigen::Index n = system.n();
  ComplexMatrix block(2 * n, 2 * n);
  block << system.p1(), -system.p1(), ComplexMatrix::Identity(n, n), ComplexMatrix::Identity(n, n);
  Eigen::FullPivLU<ComplexMatrix> lu(block);
  if (!lu.isInvertible()) throw SingularityError("[P1 -P1; I I] is numerically singular");
  return system.wb_tilde() * lu.inverse();
}

ComplexMatrix sigma(Eigen::Index n) {
  ComplexMatrix s = ComplexMatrix::Zero(2 * n, 2 * n);
  s.topRightCorner(n, n).setIdentity();
  s.bottomLeftCorner(n, n).setIdentity();
  return s;
}

int rank_of(const ComplexMatrix& m, double tol_rank) {
  const RealVector sv = linalg::singular_values(m);
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  return static_cast<int>((sv.array() >= tol_rank * sv(0)).count());
}

Inertia inertia(const ComplexMatrix& m, const Tolerances& tol) {
  if (!linalg::is_hermitian(m, tol.herm)) throw ShapeError("inertia needs a Hermitian matrix");
  const RealVector d = linalg::hermitian_eigenvalues(hermitian_part(m));
  const double band = tol.eig * std::max(1.0, d.size() ? d.cwiseAbs().maxCoeff() : 0.0);
  Inertia out;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (d(i) > band)
      ++out.positive;
    else if (d(i) < -band)
      ++out.negative;
    else
      ++out.zero;
  }
  return out;
}

RealVector EigenSplit::speeds() const {
  RealVector s(n1 + n2);
  s << lambda, theta;
  return s;
}

EigenSplit eigensplit(const PHSystem& system, double zeta, const Tolerances& tol) {
  return eigensplit_work(system, zeta, tol).split;
}

std::vector<double> uniform_grid(int points) {
  if (points < 2) throw DomainError("a grid on [0,1] needs at least two points");
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = static_cast<double>(i) / (points - 1);
  g.back() = 1.0;
  return g;
}

FieldDiagonalization diagonalize_field(const PHSystem& system, std::span<const double> grid,
                                       const Tolerances& tol) {
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!(grid[k] >= 0.0 && grid[k] <= 1.0)) throw DomainError("grid point outside [0,1]");
    if (k > 0 && !(grid[k] > grid[k - 1])) throw DomainError("grid must be strictly increasing");
  }

  // Pointwise work is independent; alignment below is a sequential pass.
  std::vector<SplitWork> work;
  work.reserve(grid.size());
  for (double z : grid) work.push_back(eigensplit_work(system, z, tol));

  FieldDiagonalization out;
  for (std::size_t k = 1; k < work.size(); ++k) {
    const ComplexMatrix& q_prev = work[k - 1].q;
    SplitWork& cur = work[k];
    const RealVector speeds = cur.split.speeds();
    const double cluster_tol = 1e-8 * cur.scale;

    for (const auto& [begin, size] : eigenvalue_clusters(speeds, cluster_tol)) {
      const ComplexMatrix c = cur.q.middleCols(begin, size).adjoint() * q_prev.middleCols(begin, size);
      Eigen::JacobiSVD<ComplexMatrix> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
      if (svd.singularValues().size() == 0 || svd.singularValues()(0) == 0.0) continue;
      const ComplexMatrix rotation = svd.matrixU() * svd.matrixV().adjoint();
      cur.q.middleCols(begin, size) = cur.q.middleCols(begin, size) * rotation;
    }
    cur.split.s_inv = cur.h_inv_sqrt * cur.q;

    // An eigenvector that matches a different branch of the previous point
    // better than its own means the sorted branches swapped.
    const Eigen::MatrixXd overlap = (cur.q.adjoint() * q_prev).cwiseAbs();
    for (Eigen::Index i = 0; i < overlap.rows(); ++i) {
      Eigen::Index best = 0;
      overlap.row(i).maxCoeff(&best);
      if (best != i && std::abs(speeds(i) - speeds(best)) > cluster_tol) {
        out.crossing = true;
        out.warnings.push_back("ContinuityWarning: eigenvalue branches cross between zeta=" +
                               fmt(grid[k - 1]) + " and zeta=" + fmt(grid[k]));
        break;
      }
    }

    const ComplexMatrix diff = cur.split.s_inv - work[k - 1].split.s_inv;
    for (Eigen::Index j = 0; j < diff.cols(); ++j)
      out.max_column_jump = std::max(out.max_column_jump, diff.col(j).norm());
  }

  out.splits.reserve(work.size());
  for (auto& w : work) out.splits.push_back(std::move(w.split));
  return out;
}

BoundaryClosure boundary_closure(const PHSystem& system, const EigenSplit& at0,
                                 const EigenSplit& at1, bool use_orthonormal_bases) {
  const Eigen::Index n = system.n();
  BoundaryClosure c;
  c.w1 = system.wb_tilde().leftCols(n);
  c.w0 = system.wb_tilde().rightCols(n);
  const ComplexMatrix left1 = c.w1 * system.h()(1.0);
  const ComplexMatrix left0 = c.w0 * system.h()(0.0);
  if (use_orthonormal_bases) {
    c.v1 = left1 * at1.z_plus;
    c.v2 = left1 * at1.z_minus;
    c.u1 = left0 * at0.z_plus;
    c.u2 = left0 * at0.z_minus;
  } else {
    c.v1 = left1 * at1.s_inv.leftCols(at1.n1);
    c.v2 = left1 * at1.s_inv.rightCols(at1.n2);
    c.u1 = left0 * at0.s_inv.leftCols(at0.n1);
    c.u2 = left0 * at0.s_inv.rightCols(at0.n2);
  }
  c.k.resize(n, c.v1.cols() + c.u2.cols());
  c.k << c.v1, c.u2;
  return c;
}

DirectSumResult direct_sum_check(const PHSystem& system, const Tolerances& tol) {
  const Eigen::Index n = system.n();
  const int rank = rank_of(system.wb_tilde(), tol.rank);
  if (rank != n)
    throw PreconditionError("rank of W_B tilde is " + std::to_string(rank) + " < n=" +
                            std::to_string(n) + "; the direct-sum test does not apply");
  const EigenSplit at0 = eigensplit(system, 0.0, tol);
  const EigenSplit at1 = eigensplit(system, 1.0, tol);
  const BoundaryClosure closure = boundary_closure(system, at0, at1);

  DirectSumResult r;
  r.k = closure.k;
  const RealVector sv = linalg::singular_values(r.k);
  r.max_singular_value = sv(0);
  r.min_singular_value = sv(sv.size() - 1);
  // Measure against the natural magnitude of K as well, so an all-but-zero K
  // is not mistaken for a well-conditioned one.
  const double natural = linalg::spectral_norm(system.wb_tilde()) *
                         std::max(linalg::spectral_norm(system.h()(0.0)),
                                  linalg::spectral_norm(system.h()(1.0)));
  const double reference = std::max(r.max_singular_value, natural);
  r.generates = reference > 0.0 && r.min_singular_value >= tol.rank * reference;
  return r;
}

ContractionCheck check_contraction(const PHSystem& system, const Tolerances& tol) {
  const Eigen::Index n = system.n();
  ContractionCheck c;
  c.rank_wb_tilde = rank_of(system.wb_tilde(), tol.rank);
  c.rank_full = c.rank_wb_tilde == n;

  const double p0_scale = std::max(1.0, linalg::spectral_norm(system.p0()));
  c.re_p0_max_eigenvalue =
      linalg::hermitian_eigenvalues(hermitian_part(system.p0())).maxCoeff() / p0_scale;
  c.re_p0_nsd = c.re_p0_max_eigenvalue <= tol.psd;

  const ComplexMatrix wb = compute_wb(system);
  c.sigma_form = hermitian_part(wb * sigma(n) * wb.adjoint());
  const double wb_norm = linalg::spectral_norm(wb);
  const double form_scale = wb_norm > 0.0 ? wb_norm * wb_norm : 1.0;
  const RealVector ev = linalg::hermitian_eigenvalues(c.sigma_form);
  c.sigma_form_min_eigenvalue = ev.minCoeff() / form_scale;
  c.sigma_form_max_eigenvalue = ev.maxCoeff() / form_scale;
  c.sigma_form_psd = c.sigma_form_min_eigenvalue >= -tol.psd;

  c.passes = c.re_p0_nsd && c.sigma_form_psd && c.rank_full;
  return c;
}

UnitaryCheck check_unitary(const PHSystem& system, const Tolerances& tol) {
  const Eigen::Index n = system.n();
  UnitaryCheck u;
  u.rank_wb_tilde = rank_of(system.wb_tilde(), tol.rank);
  const double p0_scale = std::max(1.0, linalg::spectral_norm(system.p0()));
  u.re_p0_norm = linalg::spectral_norm(hermitian_part(system.p0())) / p0_scale;

  const ComplexMatrix wb = compute_wb(system);
  const double wb_norm = linalg::spectral_norm(wb);
  const double form_scale = wb_norm > 0.0 ? wb_norm * wb_norm : 1.0;
  u.sigma_form_norm =
      linalg::spectral_norm(hermitian_part(wb * sigma(n) * wb.adjoint())) / form_scale;
  u.passes = u.re_p0_norm <= tol.psd && u.sigma_form_norm <= tol.psd && u.rank_wb_tilde == n;
  return u;
}

std::optional<bool> Verdict::c0_semigroup() const {
  switch (c0) {
    case GenerationStatus::generator:
      return true;
    case GenerationStatus::not_generator:
      return false;
    case GenerationStatus::inconclusive:
      return std::nullopt;
  }
  return std::nullopt;
}

bool Verdict::monotone() const {
  if (unitary_group && !contraction) return false;
  if (contraction && c0 == GenerationStatus::not_generator) return false;
  return true;
}

Verdict classify(const PHSystem& system, const ClassifyOptions& options) {
  const Tolerances& tol = options.tol;
  Verdict v;
  v.n = static_cast<int>(system.n());
  v.p1_inertia = inertia(system.p1(), tol);

  const UnitaryCheck uc = check_unitary(system, tol);
  const ContractionCheck cc = check_contraction(system, tol);
  v.rank_wb_tilde = cc.rank_wb_tilde;
  v.re_p0_nsd = cc.re_p0_nsd;
  v.re_p0_max_eigenvalue = cc.re_p0_max_eigenvalue;
  v.sigma_form = cc.sigma_form;
  v.sigma_form_min_eigenvalue = cc.sigma_form_min_eigenvalue;
  v.contraction = cc.passes;
  v.unitary_group = uc.passes;

  try {
    const DirectSumResult ds = direct_sum_check(system, tol);
    v.c0 = ds.generates ? GenerationStatus::generator : GenerationStatus::not_generator;
    v.direct_sum_min_singular_value = ds.min_singular_value;
    v.direct_sum_max_singular_value = ds.max_singular_value;
  } catch (const PreconditionError& e) {
    v.c0 = GenerationStatus::inconclusive;
    v.notes.push_back(std::string("inconclusive-C0: ") + e.what());
  }

  if (system.h().has_kinks(1e-12))
    v.warnings.push_back(
        "assumption unmet: piecewise-linear H is not continuously differentiable; the C0 "
        "verdict assumes a smooth diagonalizer");
  if (!system.h().is_constant()) {
    try {
      const std::vector<double> grid = uniform_grid(std::max(2, options.grid_points));
      const FieldDiagonalization fd = diagonalize_field(system, grid, tol);
      v.max_column_jump = fd.max_column_jump;
      v.warnings.insert(v.warnings.end(), fd.warnings.begin(), fd.warnings.end());
    } catch (const Error& e) {
      v.warnings.push_back(std::string("diagonalization along the grid failed: ") + e.what());
    }
  }

  if (v.unitary_group && !v.contraction)
    v.notes.push_back("InternalInconsistency: unitary group but not contraction");
  if (v.contraction && v.c0 == GenerationStatus::not_generator)
    v.notes.push_back("InternalInconsistency: contraction but direct-sum test fails");
  return v;
}

std::string to_string(GenerationStatus status) {
  switch (status) {
    case GenerationStatus::generator:
      return "generator";
    case GenerationStatus::not_generator:
      return "not_generator";
    case GenerationStatus::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

nlohmann::json to_json(const Verdict& v) {
  nlohmann::json j;
  j["contraction"] = v.contraction;
  j["unitary"] = v.unitary_group;
  if (const auto c0 = v.c0_semigroup())
    j["c0"] = *c0;
  else
    j["c0"] = nullptr;
  j["c0_status"] = to_string(v.c0);
  j["witnesses"] = {
      {"n", v.n},
      {"rank_wb_tilde", v.rank_wb_tilde},
      {"p1_inertia", {{"positive", v.p1_inertia.positive}, {"negative", v.p1_inertia.negative}}},
      {"re_p0_nsd", v.re_p0_nsd},
      {"re_p0_max_eigenvalue", v.re_p0_max_eigenvalue},
      {"sigma_form_min_eigenvalue", v.sigma_form_min_eigenvalue},
      {"direct_sum_min_singular_value", v.direct_sum_min_singular_value},
      {"direct_sum_max_singular_value", v.direct_sum_max_singular_value},
      {"max_column_jump", v.max_column_jump},
  };
  j["sigma_form"] = json_io::matrix_to_json(v.sigma_form);
  j["warnings"] = v.warnings;
  j["notes"] = v.notes;
  return j;
}

}  // namespace phs

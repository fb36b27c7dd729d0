#include "phs/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "phs/errors.hpp"

namespace phs::oracle {

namespace {

ComplexMatrix gaussian(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  return m;
}

// Haar-distributed unitary: QR of a complex Gaussian with the phases of R's
// diagonal pushed back into Q.
ComplexMatrix random_unitary(std::mt19937_64& rng, Eigen::Index n) {
  const ComplexMatrix g = gaussian(rng, n, n);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

ComplexMatrix with_singular_values(std::mt19937_64& rng, Eigen::Index n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  RealVector s(n);
  for (Eigen::Index i = 0; i < n; ++i) s(i) = u(rng);
  return random_unitary(rng, n) * s.cast<Complex>().asDiagonal() * random_unitary(rng, n);
}

ComplexMatrix random_hpd(std::mt19937_64& rng, Eigen::Index n, double floor) {
  const ComplexMatrix g = gaussian(rng, n, n);
  ComplexMatrix h = g * g.adjoint() / static_cast<double>(n);
  h += floor * ComplexMatrix::Identity(n, n);
  return hermitian_part(h);
}

ComplexMatrix random_hermitian(std::mt19937_64& rng, Eigen::Index n, double norm) {
  const ComplexMatrix g = hermitian_part(gaussian(rng, n, n));
  const double s = linalg::spectral_norm(g);
  return s > 0.0 ? ComplexMatrix(g * (norm / s)) : g;
}

// P0 whose Hermitian part has largest eigenvalue exactly `target`.
ComplexMatrix p0_with_target(std::mt19937_64& rng, Eigen::Index n, double target) {
  ComplexMatrix g = gaussian(rng, n, n);
  const double top = linalg::hermitian_eigenvalues(hermitian_part(g)).maxCoeff();
  g -= (top - target) * ComplexMatrix::Identity(n, n);
  return g;
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  // splitmix64 finalizer over a simple combination.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (a + 1) + 0xBF58476D1CE4E5B9ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ComplexMatrix block_matrix(const ComplexMatrix& p1) {
  const Eigen::Index n = p1.rows();
  ComplexMatrix t(2 * n, 2 * n);
  t << p1, -p1, ComplexMatrix::Identity(n, n), ComplexMatrix::Identity(n, n);
  return t;
}

ComplexMatrix boundary_form(const ComplexMatrix& p1) {
  const Eigen::Index n = p1.rows();
  ComplexMatrix f = ComplexMatrix::Zero(2 * n, 2 * n);
  f.topLeftCorner(n, n) = p1;
  f.bottomRightCorner(n, n) = -p1;
  return f;
}

}  // namespace

KernelBasis kernel_basis(const ComplexMatrix& m, double tol_rank) {
  KernelBasis out;
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
  const RealVector& sv = svd.singularValues();
  int rank = 0;
  if (sv.size() > 0 && sv(0) > 0.0)
    rank = static_cast<int>((sv.array() >= tol_rank * sv(0)).count());
  out.dim = static_cast<int>(m.cols()) - rank;
  out.basis = svd.matrixV().rightCols(out.dim);
  return out;
}

BoundaryFormExtremes boundary_form_on_kernel(const PHSystem& system, const Tolerances& tol) {
  const KernelBasis kb = kernel_basis(system.wb_tilde(), tol.rank);
  BoundaryFormExtremes out;
  out.kernel_dim = kb.dim;
  if (kb.dim == 0) return out;
  const ComplexMatrix f = hermitian_part(kb.basis.adjoint() * boundary_form(system.p1()) * kb.basis);
  const RealVector ev = linalg::hermitian_eigenvalues(f);
  const double scale = linalg::spectral_norm(system.p1());
  out.max_value = ev.maxCoeff() / scale;
  out.min_value = ev.minCoeff() / scale;
  return out;
}

OracleContraction check_contraction_via_c(const PHSystem& system, const Tolerances& tol) {
  OracleContraction out;
  const double p0_scale = std::max(1.0, linalg::spectral_norm(system.p0()));
  out.re_p0_max_eigenvalue =
      linalg::hermitian_eigenvalues(hermitian_part(system.p0())).maxCoeff() / p0_scale;
  out.form = boundary_form_on_kernel(system, tol);
  out.passes = out.re_p0_max_eigenvalue <= tol.psd && out.form.max_value <= tol.psd;
  if (out.passes) out.rank_implication_holds = out.form.kernel_dim == system.n();
  return out;
}

double sampled_boundary_form_max(const PHSystem& system, std::mt19937_64& rng, int samples,
                                 const Tolerances& tol) {
  const KernelBasis kb = kernel_basis(system.wb_tilde(), tol.rank);
  if (kb.dim == 0) return 0.0;
  const ComplexMatrix f = boundary_form(system.p1());
  const double scale = linalg::spectral_norm(system.p1());
  double best = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    ComplexVector c = gaussian(rng, kb.dim, 1).col(0);
    c.normalize();
    const ComplexVector v = kb.basis * c;
    best = std::max(best, (v.adjoint() * f * v)(0, 0).real() / scale);
  }
  return best;
}

ClassHint class_hint_from_string(const std::string& name) {
  if (name == "contraction") return ClassHint::contraction;
  if (name == "unitary") return ClassHint::unitary;
  if (name == "general") return ClassHint::general;
  throw SpecError("unknown class hint \"" + name + "\"");
}

std::string to_string(ClassHint hint) {
  switch (hint) {
    case ClassHint::contraction:
      return "contraction";
    case ClassHint::unitary:
      return "unitary";
    case ClassHint::general:
      return "general";
  }
  return "general";
}

PHSystem random_system(std::uint64_t seed, int n, ClassHint hint) {
  if (n < 1) throw DomainError("random_system needs n >= 1");
  std::mt19937_64 rng(mix(seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(hint)));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Eigen::Index dim = n;

  RealVector d(dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    d(i) = (unit(rng) < 0.5 ? -1.0 : 1.0) * (0.5 + 1.5 * unit(rng));
  const ComplexMatrix u = random_unitary(rng, dim);
  const ComplexMatrix p1 = hermitian_part(u * d.cast<Complex>().asDiagonal() * u.adjoint());

  ComplexMatrix p0;
  switch (hint) {
    case ClassHint::unitary: {
      const ComplexMatrix g = gaussian(rng, dim, dim);
      p0 = (g - g.adjoint()) * 0.5;
      break;
    }
    case ClassHint::contraction:
      p0 = p0_with_target(rng, dim, -0.05 - 0.95 * unit(rng));
      break;
    case ClassHint::general:
      p0 = p0_with_target(rng, dim, -1.0 + 2.0 * unit(rng));
      break;
  }

  ComplexMatrix wb_tilde;
  const bool unstructured = hint == ClassHint::general && unit(rng) < 0.5;
  if (unstructured) {
    wb_tilde = gaussian(rng, dim, 2 * dim);
  } else {
    ComplexMatrix v;
    switch (hint) {
      case ClassHint::unitary:
        v = random_unitary(rng, dim);
        break;
      case ClassHint::contraction:
        v = with_singular_values(rng, dim, 0.0, 0.95);
        break;
      case ClassHint::general:
        v = with_singular_values(rng, dim, 0.0, 2.0);
        break;
    }
    const ComplexMatrix m = with_singular_values(rng, dim, 0.5, 2.0);
    const ComplexMatrix id = ComplexMatrix::Identity(dim, dim);
    ComplexMatrix wb(dim, 2 * dim);
    wb << id + v, id - v;
    wb = m * wb;
    wb_tilde = wb * block_matrix(p1);
  }

  CoefficientField h = CoefficientField::constant(random_hpd(rng, dim, 0.5));
  return PHSystem::create(p1, p0, std::move(h), wb_tilde);
}

CoefficientField random_field(std::uint64_t seed, Eigen::Index n, int variant) {
  std::mt19937_64 rng(mix(seed, static_cast<std::uint64_t>(n), 100 + static_cast<std::uint64_t>(variant)));
  switch (variant) {
    case 0:
      return CoefficientField::constant(random_hpd(rng, n, 0.5));
    case 1: {
      std::vector<ComplexMatrix> c;
      c.push_back(random_hpd(rng, n, 0.5));
      c.push_back(random_hermitian(rng, n, 0.1));
      c.push_back(random_hermitian(rng, n, 0.1));
      return CoefficientField::polynomial(std::move(c));
    }
    default: {
      std::vector<double> z;
      std::vector<ComplexMatrix> vals;
      for (int k = 0; k < 8; ++k) {
        z.push_back(k / 7.0);
        vals.push_back(random_hpd(rng, n, 0.5));
      }
      z.back() = 1.0;
      return CoefficientField::grid(std::move(z), std::move(vals));
    }
  }
}

}  // namespace phs::oracle

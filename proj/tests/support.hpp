#pragma once

#include <cmath>
#include <initializer_list>
#include <string>

#include "phs/model.hpp"

namespace phs::test {

inline ComplexMatrix real_matrix(std::initializer_list<std::initializer_list<double>> rows) {
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = static_cast<Eigen::Index>(rows.begin()->size());
  ComplexMatrix m(r, c);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }
inline ComplexMatrix zeros(Eigen::Index n) { return ComplexMatrix::Zero(n, n); }

/// Transport equation ∂t x = ∂ζ(Hx) with H constant and [w1 w0] boundary row.
inline PHSystem transport(double w1, double w0, double h = 1.0) {
  return PHSystem::create(real_matrix({{1.0}}), real_matrix({{0.0}}),
                          CoefficientField::constant(real_matrix({{h}})), real_matrix({{w1, w0}}));
}

/// Vibrating string with ρ = 1 and T(ζ) = t0 + t1·ζ, boundary [I, diag(-1,1)].
inline PHSystem string_system(double t0, double t1) {
  std::vector<ComplexMatrix> coeffs{real_matrix({{1.0, 0.0}, {0.0, t0}}),
                                    real_matrix({{0.0, 0.0}, {0.0, t1}})};
  return PHSystem::create(real_matrix({{0, 1}, {1, 0}}), zeros(2),
                          CoefficientField::polynomial(std::move(coeffs)),
                          real_matrix({{1, 0, -1, 0}, {0, 1, 0, 1}}));
}

/// Network of three transport lines.
inline PHSystem network3() {
  return PHSystem::create(identity(3), zeros(3), CoefficientField::constant(identity(3)),
                          real_matrix({{1, 0, 0, 0, 0, 0}, {0, 1, 0, -1, 0, -1}, {0, 0, 1, 0, -1, 0}}));
}

inline std::string fixture(const std::string& name) {
  return std::string(PHS_FIXTURE_DIR) + "/" + name;
}

}  // namespace phs::test

#include "phs/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "phs/errors.hpp"

namespace phs {

namespace {

std::string shape_of(const ComplexMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

std::string fmt_zeta(double zeta) {
  std::ostringstream os;
  os.precision(6);
  os << zeta;
  return os.str();
}

void require_finite(const ComplexMatrix& m, const std::string& what) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag()))
        throw ValidationError(what + ": entry (" + std::to_string(i) + "," + std::to_string(j) +
                              ") is not finite");
}

void check_field_value(const ComplexMatrix& h, double zeta, const Tolerances& tol) {
  require_finite(h, "H(" + fmt_zeta(zeta) + ")");
  if (!linalg::is_hermitian(h, tol.herm))
    throw ValidationError("H not Hermitian at zeta=" + fmt_zeta(zeta));
  const double lmin = linalg::hermitian_eigenvalues(hermitian_part(h)).minCoeff();
  if (!(lmin >= tol.pd))
    throw ValidationError("H not positive definite at zeta=" + fmt_zeta(zeta) +
                          " (min eigenvalue " + std::to_string(lmin) + ")");
}

}  // namespace

// ---------------------------------------------------------------------------
// CoefficientField

CoefficientField::CoefficientField(Kind kind, std::vector<ComplexMatrix> matrices,
                                   std::vector<double> zetas)
    : kind_(kind), matrices_(std::move(matrices)), zetas_(std::move(zetas)) {
  if (matrices_.empty()) throw ValidationError("coefficient field has no matrices");
  dim_ = matrices_.front().rows();
  for (const auto& m : matrices_) {
    if (m.rows() != dim_ || m.cols() != dim_)
      throw ValidationError("coefficient field matrices must all be " + std::to_string(dim_) +
                            "x" + std::to_string(dim_) + ", got " + shape_of(m));
  }
}

CoefficientField CoefficientField::constant(ComplexMatrix value) {
  std::vector<ComplexMatrix> ms;
  ms.push_back(std::move(value));
  return CoefficientField(Kind::constant, std::move(ms), {});
}

CoefficientField CoefficientField::polynomial(std::vector<ComplexMatrix> coefficients) {
  return CoefficientField(Kind::polynomial, std::move(coefficients), {});
}

CoefficientField CoefficientField::grid(std::vector<double> zetas,
                                        std::vector<ComplexMatrix> values) {
  if (zetas.size() != values.size())
    throw ValidationError("grid field: " + std::to_string(zetas.size()) + " nodes but " +
                          std::to_string(values.size()) + " values");
  if (zetas.size() < 2) throw ValidationError("grid field needs at least two nodes");
  if (zetas.front() != 0.0 || zetas.back() != 1.0)
    throw ValidationError("grid field nodes must start at 0 and end at 1");
  for (std::size_t k = 1; k < zetas.size(); ++k)
    if (!(zetas[k] > zetas[k - 1]))
      throw ValidationError("grid field nodes must be strictly increasing (node " +
                            std::to_string(k) + ")");
  return CoefficientField(Kind::grid, std::move(values), std::move(zetas));
}

ComplexMatrix CoefficientField::operator()(double zeta) const {
  if (!(zeta >= 0.0 && zeta <= 1.0))
    throw DomainError("zeta=" + fmt_zeta(zeta) + " outside [0,1]");
  switch (kind_) {
    case Kind::constant:
      return matrices_.front();
    case Kind::polynomial: {
      ComplexMatrix acc = matrices_.back();
      for (auto it = matrices_.rbegin() + 1; it != matrices_.rend(); ++it) acc = acc * zeta + *it;
      return acc;
    }
    case Kind::grid: {
      const auto upper = std::upper_bound(zetas_.begin(), zetas_.end(), zeta);
      std::size_t k = upper == zetas_.end() ? zetas_.size() - 2
                                            : static_cast<std::size_t>(upper - zetas_.begin()) - 1;
      k = std::min(k, zetas_.size() - 2);
      const double w = (zeta - zetas_[k]) / (zetas_[k + 1] - zetas_[k]);
      const ComplexMatrix m = (1.0 - w) * matrices_[k] + w * matrices_[k + 1];
      return hermitian_part(m);
    }
  }
  return {};
}

bool CoefficientField::is_constant() const {
  switch (kind_) {
    case Kind::constant:
      return true;
    case Kind::polynomial:
      return std::all_of(matrices_.begin() + 1, matrices_.end(),
                         [](const ComplexMatrix& c) { return c.isZero(0.0); });
    case Kind::grid:
      return std::all_of(matrices_.begin() + 1, matrices_.end(),
                         [&](const ComplexMatrix& m) { return m == matrices_.front(); });
  }
  return false;
}

bool CoefficientField::has_kinks(double tol) const {
  if (kind_ != Kind::grid) return false;
  for (std::size_t k = 1; k + 1 < zetas_.size(); ++k) {
    const ComplexMatrix left = (matrices_[k] - matrices_[k - 1]) / (zetas_[k] - zetas_[k - 1]);
    const ComplexMatrix right = (matrices_[k + 1] - matrices_[k]) / (zetas_[k + 1] - zetas_[k]);
    const double scale = std::max({1.0, left.norm(), right.norm()});
    if ((left - right).norm() > tol * scale) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// PHSystem

PHSystem::PHSystem(ComplexMatrix p1, ComplexMatrix p0, CoefficientField h, ComplexMatrix wb_tilde)
    : p1_(std::move(p1)), p0_(std::move(p0)), h_(std::move(h)), wb_tilde_(std::move(wb_tilde)) {}

PHSystem PHSystem::create(ComplexMatrix p1, ComplexMatrix p0, CoefficientField h,
                          ComplexMatrix wb_tilde, const ValidationOptions& options) {
  const Tolerances& tol = options.tol;
  const Eigen::Index n = p1.rows();
  if (n < 1 || p1.cols() != n)
    throw ValidationError("P1 must be a non-empty square matrix, got " + shape_of(p1));
  require_finite(p1, "P1");
  if (!linalg::is_hermitian(p1, tol.herm)) throw ValidationError("P1 not Hermitian");
  const RealVector sv = linalg::singular_values(p1);
  if (!(sv(0) > 0.0) || !(sv(n - 1) >= tol.inv * sv(0)))
    throw ValidationError("P1 singular (smallest singular value " + std::to_string(sv(n - 1)) +
                          ")");

  if (p0.rows() != n || p0.cols() != n)
    throw ValidationError("P0 must be " + std::to_string(n) + "x" + std::to_string(n) +
                          ", got " + shape_of(p0));
  require_finite(p0, "P0");

  if (wb_tilde.rows() != n || wb_tilde.cols() != 2 * n)
    throw ValidationError("W_B tilde must be " + std::to_string(n) + "x" +
                          std::to_string(2 * n) + ", got " + shape_of(wb_tilde));
  require_finite(wb_tilde, "W_B tilde");

  if (h.dim() != n)
    throw ValidationError("H must be " + std::to_string(n) + "x" + std::to_string(n) +
                          ", got dimension " + std::to_string(h.dim()));
  if (options.sample_count < 2) throw ValidationError("sample budget must be at least 2");
  const int samples = h.kind() == CoefficientField::Kind::constant ? 1 : options.sample_count;
  for (int i = 0; i < samples; ++i) {
    const double zeta = samples == 1 ? 0.0 : static_cast<double>(i) / (samples - 1);
    check_field_value(h(zeta), zeta, tol);
  }
  if (h.kind() == CoefficientField::Kind::grid) {
    for (std::size_t k = 0; k < h.zetas().size(); ++k)
      check_field_value(h.matrices()[k], h.zetas()[k], tol);
  }
  return PHSystem(std::move(p1), std::move(p0), std::move(h), std::move(wb_tilde));
}

PHSystem PHSystem::with_h(CoefficientField h, const ValidationOptions& options) const {
  return create(p1_, p0_, std::move(h), wb_tilde_, options);
}

PHSystem PHSystem::with_wb_tilde(ComplexMatrix wb_tilde, const ValidationOptions& options) const {
  return create(p1_, p0_, h_, std::move(wb_tilde), options);
}

ComplexMatrix eval_h(const PHSystem& system, double zeta) { return system.h()(zeta); }

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  if (m.rows() != m.cols())
    throw ShapeError("hermitian_part needs a square matrix, got " + shape_of(m));
  return (m + m.adjoint()) * 0.5;
}

// ---------------------------------------------------------------------------
// JSON

namespace json_io {

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

Complex scalar_from_json(const nlohmann::json& j, const std::string& what) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw SchemaError(what + ": complex scalar must be a number or a [re, im] pair");
}

}  // namespace

ComplexMatrix matrix_from_json(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw SchemaError(what + ": expected a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty())
    throw SchemaError(what + ": row 0 must be a non-empty array");
  const std::size_t cols = j[0].size();
  ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw SchemaError(what + ": row " + std::to_string(r) + " has wrong length");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          scalar_from_json(j[r][c], what + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
  }
  return m;
}

}  // namespace json_io

namespace {

const nlohmann::json& require_key(const nlohmann::json& doc, const char* key,
                                  const std::string& where) {
  if (!doc.contains(key)) throw SchemaError(where + ": missing key \"" + key + "\"");
  return doc.at(key);
}

CoefficientField field_from_json(const nlohmann::json& j, Eigen::Index n) {
  if (!j.is_object()) throw SchemaError("h: expected an object");
  const auto& kind_j = require_key(j, "kind", "h");
  if (!kind_j.is_string()) throw SchemaError("h.kind must be a string");
  const std::string kind = kind_j.get<std::string>();

  if (kind == "constant") {
    return CoefficientField::constant(json_io::matrix_from_json(require_key(j, "value", "h"), "h.value"));
  }
  if (kind == "polynomial") {
    // Per-entry coefficient lists in ascending powers of zeta.
    const auto& coeffs = require_key(j, "coefficients", "h");
    if (!coeffs.is_array() || coeffs.size() != static_cast<std::size_t>(n))
      throw SchemaError("h.coefficients must have n rows");
    std::size_t degree = 0;
    for (const auto& row : coeffs) {
      if (!row.is_array() || row.size() != static_cast<std::size_t>(n))
        throw SchemaError("h.coefficients rows must have n entries");
      for (const auto& entry : row) {
        if (!entry.is_array() || entry.empty())
          throw SchemaError("h.coefficients entries must be non-empty coefficient lists");
        degree = std::max(degree, entry.size());
      }
    }
    std::vector<ComplexMatrix> ms(degree, ComplexMatrix::Zero(n, n));
    for (Eigen::Index r = 0; r < n; ++r) {
      for (Eigen::Index c = 0; c < n; ++c) {
        const auto& entry = coeffs[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        for (std::size_t k = 0; k < entry.size(); ++k) {
          const auto& s = entry[k];
          if (s.is_number()) {
            ms[k](r, c) = s.get<double>();
          } else if (s.is_array() && s.size() == 2 && s[0].is_number() && s[1].is_number()) {
            ms[k](r, c) = Complex(s[0].get<double>(), s[1].get<double>());
          } else {
            throw SchemaError("h.coefficients: coefficient must be a number or [re, im]");
          }
        }
      }
    }
    return CoefficientField::polynomial(std::move(ms));
  }
  if (kind == "grid") {
    const auto& zj = require_key(j, "zetas", "h");
    const auto& vj = require_key(j, "values", "h");
    if (!zj.is_array() || !vj.is_array()) throw SchemaError("h.zetas and h.values must be arrays");
    std::vector<double> zetas;
    for (const auto& z : zj) {
      if (!z.is_number()) throw SchemaError("h.zetas must contain numbers");
      zetas.push_back(z.get<double>());
    }
    std::vector<ComplexMatrix> values;
    for (std::size_t k = 0; k < vj.size(); ++k)
      values.push_back(json_io::matrix_from_json(vj[k], "h.values[" + std::to_string(k) + "]"));
    return CoefficientField::grid(std::move(zetas), std::move(values));
  }
  throw SchemaError("h.kind must be one of constant, polynomial, grid (got \"" + kind + "\")");
}

nlohmann::json field_to_json(const CoefficientField& h) {
  nlohmann::json j;
  switch (h.kind()) {
    case CoefficientField::Kind::constant:
      j["kind"] = "constant";
      j["value"] = json_io::matrix_to_json(h.matrices().front());
      break;
    case CoefficientField::Kind::polynomial: {
      j["kind"] = "polynomial";
      const Eigen::Index n = h.dim();
      nlohmann::json rows = nlohmann::json::array();
      for (Eigen::Index r = 0; r < n; ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < n; ++c) {
          nlohmann::json entry = nlohmann::json::array();
          for (const auto& m : h.matrices()) entry.push_back({m(r, c).real(), m(r, c).imag()});
          row.push_back(std::move(entry));
        }
        rows.push_back(std::move(row));
      }
      j["coefficients"] = std::move(rows);
      break;
    }
    case CoefficientField::Kind::grid: {
      j["kind"] = "grid";
      j["zetas"] = h.zetas();
      nlohmann::json values = nlohmann::json::array();
      for (const auto& m : h.matrices()) values.push_back(json_io::matrix_to_json(m));
      j["values"] = std::move(values);
      break;
    }
  }
  return j;
}

}  // namespace

PHSystem load_system(const nlohmann::json& document, const ValidationOptions& options) {
  if (!document.is_object()) throw SchemaError("model document must be a JSON object");
  const auto& nj = require_key(document, "n", "model");
  if (!nj.is_number_integer() || nj.get<long long>() < 1)
    throw SchemaError("model: \"n\" must be a positive integer");
  const auto n = static_cast<Eigen::Index>(nj.get<long long>());

  ComplexMatrix p1 = json_io::matrix_from_json(require_key(document, "p1", "model"), "p1");
  ComplexMatrix p0 = json_io::matrix_from_json(require_key(document, "p0", "model"), "p0");
  ComplexMatrix wb = json_io::matrix_from_json(require_key(document, "wb_tilde", "model"), "wb_tilde");
  CoefficientField h = field_from_json(require_key(document, "h", "model"), n);

  if (p1.rows() != n)
    throw ValidationError("P1 has " + std::to_string(p1.rows()) + " rows but n=" + std::to_string(n));
  return PHSystem::create(std::move(p1), std::move(p0), std::move(h), std::move(wb), options);
}

PHSystem load_system_file(const std::filesystem::path& path, const ValidationOptions& options) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open model document " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
  return load_system(doc, options);
}

nlohmann::json to_json(const PHSystem& system) {
  nlohmann::json j;
  j["n"] = system.n();
  j["p1"] = json_io::matrix_to_json(system.p1());
  j["p0"] = json_io::matrix_to_json(system.p0());
  j["h"] = field_to_json(system.h());
  j["wb_tilde"] = json_io::matrix_to_json(system.wb_tilde());
  return j;
}

}  // namespace phs

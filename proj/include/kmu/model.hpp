#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kmu/matrix.hpp"

namespace kmu {

// Homogeneous manifold presented by a global frame with constant structure
// constants: [e_i, e_j] = sum_k C[i][j][k] e_k, together with the contact
// metric data (g, eta, xi, phi) expressed in that frame. Indices are 0-based
// in memory, 1-based in the file format and in diagnostics.
template <typename S>
struct FrameModel {
  int dim = 0;  // 2n+1
  std::vector<std::string> frame_names;
  std::vector<S> structure_constants;  // dim^3, [(i*dim+j)*dim+k]
  Matrix<S> metric;
  Vec<S> eta;
  Vec<S> xi;
  Matrix<S> phi;

  int n() const { return (dim - 1) / 2; }

  const S& c(int i, int j, int k) const { return structure_constants[(i * dim + j) * dim + k]; }
  S& c(int i, int j, int k) { return structure_constants[(i * dim + j) * dim + k]; }

  // [e_i, e_j] as a coefficient vector.
  Vec<S> bracket_basis(int i, int j) const {
    Vec<S> v(dim);
    for (int k = 0; k < dim; ++k) v[k] = c(i, j, k);
    return v;
  }

  S eta_of(const Vec<S>& v) const {
    S acc(0);
    for (int k = 0; k < dim; ++k) acc += eta[k] * v[k];
    return acc;
  }
};

template <typename S>
bool model_equal(const FrameModel<S>& a, const FrameModel<S>& b) {
  if (a.dim != b.dim || a.eta.size() != b.eta.size()) return false;
  for (size_t k = 0; k < a.structure_constants.size(); ++k)
    if (a.structure_constants[k] != b.structure_constants[k]) return false;
  return a.metric == b.metric && a.phi == b.phi && vec_equal(a.eta, b.eta) && vec_equal(a.xi, b.xi);
}

template <typename S>
Vec<S> basis_vec(int dim, int k) {
  Vec<S> v(dim, S(0));
  v[k] = S(1);
  return v;
}

// dη(e_i, e_j) = -(1/2) η([e_i, e_j]) in a constant-coefficient frame; the
// 1/2 normalization pairs with dη(X,Y) = g(X, φY) on the catalog and is
// re-checked explicitly by the axiom suite rather than assumed.
template <typename S>
Matrix<S> d_eta(const FrameModel<S>& m) {
  Matrix<S> d(m.dim, m.dim);
  S half = S(1) / S(2);
  for (int i = 0; i < m.dim; ++i)
    for (int j = 0; j < m.dim; ++j) d.at(i, j) = -half * m.eta_of(m.bracket_basis(i, j));
  return d;
}

// Structural invariants of the presentation: bracket antisymmetry, the Jacobi
// identity, positive-definiteness of g, eta(xi)=1, i_xi d_eta=0, and
// non-degeneracy of d_eta on ker(eta). Contact metric axioms proper
// (phi^2, compatibility, ...) are the verifier's job, not the loader's.
template <typename S>
void validate_model(const FrameModel<S>& m) {
  int dim = m.dim;
  if (dim < 3 || dim % 2 == 0) fail(ErrorKind::InvariantViolation, "dim must be odd and >= 3");

  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        if (m.c(i, j, k) != -m.c(j, i, k))
          fail(ErrorKind::InvariantViolation, "antisymmetry(" + std::to_string(i + 1) + "," +
                                                  std::to_string(j + 1) + "," + std::to_string(k + 1) + ")");

  auto bracket_vec = [&](const Vec<S>& x, const Vec<S>& y) {
    Vec<S> r(dim, S(0));
    for (int i = 0; i < dim; ++i) {
      if (x[i].is_zero()) continue;
      for (int j = 0; j < dim; ++j) {
        if (y[j].is_zero()) continue;
        for (int k = 0; k < dim; ++k) r[k] += x[i] * y[j] * m.c(i, j, k);
      }
    }
    return r;
  };
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j)
      for (int k = j + 1; k < dim; ++k) {
        Vec<S> acc = bracket_vec(m.bracket_basis(i, j), basis_vec<S>(dim, k));
        acc = vadd(acc, bracket_vec(m.bracket_basis(j, k), basis_vec<S>(dim, i)));
        acc = vadd(acc, bracket_vec(m.bracket_basis(k, i), basis_vec<S>(dim, j)));
        if (!vec_is_zero(acc))
          fail(ErrorKind::InvariantViolation, "Jacobi(" + std::to_string(i + 1) + "," +
                                                  std::to_string(j + 1) + "," + std::to_string(k + 1) + ")");
      }

  if (!m.metric.is_symmetric()) fail(ErrorKind::InvariantViolation, "metric symmetry");
  for (int k = 1; k <= dim; ++k) {
    Matrix<S> minor(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) minor.at(i, j) = m.metric.at(i, j);
    if (det(minor).sign() <= 0)
      fail(ErrorKind::InvariantViolation, "metric positive definite (minor " + std::to_string(k) + ")");
  }

  if (m.eta_of(m.xi) != S(1)) fail(ErrorKind::InvariantViolation, "eta(xi)=1");

  Matrix<S> de = d_eta(m);
  for (int j = 0; j < dim; ++j) {
    S acc(0);
    for (int i = 0; i < dim; ++i) acc += m.xi[i] * de.at(i, j);
    if (!acc.is_zero()) fail(ErrorKind::InvariantViolation, "i_xi d_eta");
  }

  // contact condition: d_eta non-degenerate on ker(eta)
  Matrix<S> eta_row(1, dim);
  for (int j = 0; j < dim; ++j) eta_row.at(0, j) = m.eta[j];
  std::vector<Vec<S>> kernel = nullspace(eta_row);
  if (static_cast<int>(kernel.size()) != dim - 1)
    fail(ErrorKind::InvariantViolation, "contact condition");
  Matrix<S> restricted(dim - 1, dim - 1);
  for (int a = 0; a < dim - 1; ++a)
    for (int b = 0; b < dim - 1; ++b) {
      S acc(0);
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) acc += kernel[a][i] * de.at(i, j) * kernel[b][j];
      restricted.at(a, b) = acc;
    }
  if (det(restricted).is_zero()) fail(ErrorKind::InvariantViolation, "contact condition");
}

// dim-3 frame family: [e2,e3]=2e1, [e3,e1]=c2·e2, [e1,e2]=c3·e3, with xi=e1,
// g the identity, phi(e2)=e3, phi(e3)=-e2. The Jacobi identity holds for
// every (c2,c3); which of e2,e3 spans the positive eigenspace of h depends on
// the sign of c2-c3 and is computed downstream, never assumed.
template <typename S>
FrameModel<S> milnor_model(const S& c2, const S& c3) {
  FrameModel<S> m;
  m.dim = 3;
  m.frame_names = {"e1", "e2", "e3"};
  m.structure_constants.assign(27, S(0));
  auto set_bracket = [&](int i, int j, int k, const S& v) {
    m.c(i, j, k) = v;
    m.c(j, i, k) = -v;
  };
  set_bracket(1, 2, 0, S(2));
  set_bracket(2, 0, 1, c2);
  set_bracket(0, 1, 2, c3);
  m.metric = Matrix<S>::identity(3);
  m.eta = {S(1), S(0), S(0)};
  m.xi = {S(1), S(0), S(0)};
  m.phi = Matrix<S>(3, 3);
  m.phi.at(2, 1) = S(1);   // phi e2 = e3
  m.phi.at(1, 2) = S(-1);  // phi e3 = -e2
  return m;
}

template <typename S>
struct CatalogEntry {
  std::string name;
  std::string expected_class;
  FrameModel<S> model;
};

// One representative per classification outcome.
template <typename S>
std::vector<CatalogEntry<S>> catalog() {
  return {
      {"heisenberg", "Sasakian", milnor_model<S>(S(0), S(0))},
      {"class-I", "I", milnor_model<S>(S(4), S(1))},
      {"class-II", "II", milnor_model<S>(S(1), S(-4))},
      {"class-III", "III", milnor_model<S>(S(-1), S(-4))},
      {"class-IV", "IV", milnor_model<S>(S(2), S(0))},
      {"class-V", "V", milnor_model<S>(S(0), S(-2))},
  };
}

// --- JSON model file format ------------------------------------------------
//
// {"schema_version":"1","dim":3,"frame_names":[...],
//  "brackets":[{"i":2,"j":3,"coeffs":["2","0","0"]},...],
//  "metric":[["1","0","0"],...],"eta":[...],"xi":[...],"phi":[[...],...]}
//
// Indices are 1-based; scalars are exact strings; bracket pairs not listed
// default to zero (the mirrored pair is filled by antisymmetry unless the
// file specifies it explicitly, in which case it is validated).

using json = nlohmann::ordered_json;

namespace detail {

inline const json& require_field(const json& j, const char* key) {
  if (!j.contains(key)) fail(ErrorKind::ParseError, std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline ExactScalar parse_scalar_field(const json& j, const std::string& where) {
  if (!j.is_string()) fail(ErrorKind::ParseError, "expected scalar string at " + where);
  try {
    return ExactScalar::parse(j.get<std::string>());
  } catch (const Error& e) {
    fail(ErrorKind::ParseError, where + ": " + e.detail());
  }
}

inline Matrix<ExactScalar> parse_matrix_field(const json& j, int dim, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    fail(ErrorKind::ParseError, where + ": expected " + std::to_string(dim) + " rows");
  Matrix<ExactScalar> m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const json& row = j.at(i);
    if (!row.is_array() || static_cast<int>(row.size()) != dim)
      fail(ErrorKind::ParseError, where + " row " + std::to_string(i + 1) + ": expected " +
                                      std::to_string(dim) + " entries");
    for (int k = 0; k < dim; ++k)
      m.at(i, k) = parse_scalar_field(row.at(k), where + "[" + std::to_string(i + 1) + "][" +
                                                     std::to_string(k + 1) + "]");
  }
  return m;
}

inline Vec<ExactScalar> parse_vec_field(const json& j, int dim, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    fail(ErrorKind::ParseError, where + ": expected " + std::to_string(dim) + " entries");
  Vec<ExactScalar> v(dim);
  for (int k = 0; k < dim; ++k)
    v[k] = parse_scalar_field(j.at(k), where + "[" + std::to_string(k + 1) + "]");
  return v;
}

}  // namespace detail

inline FrameModel<ExactScalar> model_from_json(const json& j) {
  if (!j.is_object()) fail(ErrorKind::ParseError, "model file is not a JSON object");
  std::string version = detail::require_field(j, "schema_version").get<std::string>();
  if (version != "1") fail(ErrorKind::ParseError, "unsupported schema_version \"" + version + "\"");
  FrameModel<ExactScalar> m;
  m.dim = detail::require_field(j, "dim").get<int>();
  if (m.dim < 3 || m.dim % 2 == 0)
    fail(ErrorKind::ParseError, "dim must be odd and >= 3, got " + std::to_string(m.dim));
  if (j.contains("frame_names")) {
    m.frame_names = j.at("frame_names").get<std::vector<std::string>>();
    if (static_cast<int>(m.frame_names.size()) != m.dim)
      fail(ErrorKind::ParseError, "frame_names: expected " + std::to_string(m.dim) + " labels");
  } else {
    for (int k = 1; k <= m.dim; ++k) m.frame_names.push_back("e" + std::to_string(k));
  }
  m.structure_constants.assign(static_cast<size_t>(m.dim) * m.dim * m.dim, ExactScalar(0));
  std::vector<bool> given(static_cast<size_t>(m.dim) * m.dim, false);
  const json& brackets = detail::require_field(j, "brackets");
  if (!brackets.is_array()) fail(ErrorKind::ParseError, "brackets: expected array");
  for (const json& entry : brackets) {
    int i = detail::require_field(entry, "i").get<int>();
    int jj = detail::require_field(entry, "j").get<int>();
    if (i < 1 || i > m.dim || jj < 1 || jj > m.dim)
      fail(ErrorKind::ParseError, "bracket index out of range (" + std::to_string(i) + "," +
                                      std::to_string(jj) + ")");
    std::string where = "brackets(" + std::to_string(i) + "," + std::to_string(jj) + ")";
    if (given[(i - 1) * m.dim + (jj - 1)]) fail(ErrorKind::ParseError, "duplicate " + where);
    given[(i - 1) * m.dim + (jj - 1)] = true;
    Vec<ExactScalar> coeffs =
        detail::parse_vec_field(detail::require_field(entry, "coeffs"), m.dim, where);
    for (int k = 0; k < m.dim; ++k) m.c(i - 1, jj - 1, k) = coeffs[k];
  }
  // fill unspecified mirrors by antisymmetry; explicit pairs stay as written
  // so that inconsistent files are caught by validation
  for (int i = 0; i < m.dim; ++i)
    for (int jj = 0; jj < m.dim; ++jj)
      if (given[i * m.dim + jj] && !given[jj * m.dim + i])
        for (int k = 0; k < m.dim; ++k) m.c(jj, i, k) = -m.c(i, jj, k);
  m.metric = detail::parse_matrix_field(detail::require_field(j, "metric"), m.dim, "metric");
  m.eta = detail::parse_vec_field(detail::require_field(j, "eta"), m.dim, "eta");
  m.xi = detail::parse_vec_field(detail::require_field(j, "xi"), m.dim, "xi");
  m.phi = detail::parse_matrix_field(detail::require_field(j, "phi"), m.dim, "phi");
  return m;
}

template <typename S>
json model_to_json(const FrameModel<S>& m) {
  json j = json::object();
  j["schema_version"] = "1";
  j["dim"] = m.dim;
  j["frame_names"] = m.frame_names;
  json brackets = json::array();
  for (int i = 0; i < m.dim; ++i)
    for (int jj = i + 1; jj < m.dim; ++jj) {
      bool nonzero = false;
      for (int k = 0; k < m.dim; ++k)
        if (!m.c(i, jj, k).is_zero()) nonzero = true;
      if (!nonzero) continue;
      json entry = json::object();
      entry["i"] = i + 1;
      entry["j"] = jj + 1;
      json coeffs = json::array();
      for (int k = 0; k < m.dim; ++k) coeffs.push_back(exactify(m.c(i, jj, k)).str());
      entry["coeffs"] = coeffs;
      brackets.push_back(entry);
    }
  j["brackets"] = brackets;
  auto matrix_json = [&](const Matrix<S>& mat) {
    json rows = json::array();
    for (int i = 0; i < mat.rows(); ++i) {
      json row = json::array();
      for (int k = 0; k < mat.cols(); ++k) row.push_back(exactify(mat.at(i, k)).str());
      rows.push_back(row);
    }
    return rows;
  };
  auto vec_json = [&](const Vec<S>& v) {
    json row = json::array();
    for (const S& x : v) row.push_back(exactify(x).str());
    return row;
  };
  j["metric"] = matrix_json(m.metric);
  j["eta"] = vec_json(m.eta);
  j["xi"] = vec_json(m.xi);
  j["phi"] = matrix_json(m.phi);
  return j;
}

template <typename S>
FrameModel<S> convert_model(const FrameModel<ExactScalar>& m) {
  if constexpr (std::is_same_v<S, ExactScalar>) {
    return m;
  } else {
    FrameModel<S> r;
    r.dim = m.dim;
    r.frame_names = m.frame_names;
    r.structure_constants.reserve(m.structure_constants.size());
    for (const ExactScalar& x : m.structure_constants) r.structure_constants.push_back(S(x.to_double()));
    r.metric = Matrix<S>(m.dim, m.dim);
    r.phi = Matrix<S>(m.dim, m.dim);
    r.eta.resize(m.dim);
    r.xi.resize(m.dim);
    for (int i = 0; i < m.dim; ++i) {
      r.eta[i] = S(m.eta[i].to_double());
      r.xi[i] = S(m.xi[i].to_double());
      for (int j = 0; j < m.dim; ++j) {
        r.metric.at(i, j) = S(m.metric.at(i, j).to_double());
        r.phi.at(i, j) = S(m.phi.at(i, j).to_double());
      }
    }
    return r;
  }
}

// Load, validate, and (for the float backend) convert. Parse problems raise
// ParseError, unreadable files IoError, semantic problems InvariantViolation.
template <typename S>
FrameModel<S> load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoError, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ParseError, path + ": " + e.what());
  }
  FrameModel<ExactScalar> exact = model_from_json(j);
  FrameModel<S> m = convert_model<S>(exact);
  validate_model(m);
  return m;
}

template <typename S>
void save_model(const FrameModel<S>& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::IoError, "cannot write " + path);
  out << model_to_json(m).dump(2) << "\n";
}

}  // namespace kmu

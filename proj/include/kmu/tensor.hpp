#pragma once

#include <string>
#include <vector>

#include "kmu/model.hpp"

namespace kmu {

// Bilinear extension of the structure constants: both arguments are constant
// coefficient vectors in the invariant frame, so no derivative terms appear.
template <typename S>
Vec<S> bracket(const FrameModel<S>& m, const Vec<S>& x, const Vec<S>& y) {
  Vec<S> r(m.dim, S(0));
  for (int i = 0; i < m.dim; ++i) {
    if (x[i].is_zero()) continue;
    for (int j = 0; j < m.dim; ++j) {
      if (y[j].is_zero()) continue;
      S f = x[i] * y[j];
      for (int k = 0; k < m.dim; ++k) r[k] += f * m.c(i, j, k);
    }
  }
  return r;
}

enum class ConnectionSource { levi_civita, bi_legendrian };

// Frame connection: nabla_{e_i} e_j = sum_k gamma[i][j][k] e_k.
template <typename S>
struct Connection {
  int dim = 0;
  ConnectionSource source = ConnectionSource::levi_civita;
  std::vector<S> gamma;  // dim^3

  const S& g(int i, int j, int k) const { return gamma[(i * dim + j) * dim + k]; }
  S& g(int i, int j, int k) { return gamma[(i * dim + j) * dim + k]; }

  Vec<S> derive_basis(int i, int j) const {
    Vec<S> v(dim);
    for (int k = 0; k < dim; ++k) v[k] = g(i, j, k);
    return v;
  }

  // nabla_X Y for constant coefficient vectors.
  Vec<S> derive(const Vec<S>& x, const Vec<S>& y) const {
    Vec<S> r(dim, S(0));
    for (int i = 0; i < dim; ++i) {
      if (x[i].is_zero()) continue;
      for (int j = 0; j < dim; ++j) {
        if (y[j].is_zero()) continue;
        S f = x[i] * y[j];
        for (int k = 0; k < dim; ++k) r[k] += f * g(i, j, k);
      }
    }
    return r;
  }
};

// Koszul formula on an invariant frame:
//   2 g(nabla_X Y, Z) = g([X,Y],Z) - g([Y,Z],X) + g([Z,X],Y).
// The coefficients come from solving against the Gram matrix; metric
// compatibility and torsion-freeness are re-verified exactly afterwards.
template <typename S>
Connection<S> levi_civita(const FrameModel<S>& m) {
  int dim = m.dim;
  Connection<S> conn;
  conn.dim = dim;
  conn.source = ConnectionSource::levi_civita;
  conn.gamma.assign(static_cast<size_t>(dim) * dim * dim, S(0));
  S half = S(1) / S(2);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      Vec<S> rhs(dim);
      for (int k = 0; k < dim; ++k) {
        Vec<S> ek = basis_vec<S>(dim, k);
        S t = form_eval(m.metric, m.bracket_basis(i, j), ek) -
              form_eval(m.metric, bracket(m, basis_vec<S>(dim, j), ek), basis_vec<S>(dim, i)) +
              form_eval(m.metric, bracket(m, ek, basis_vec<S>(dim, i)), basis_vec<S>(dim, j));
        rhs[k] = half * t;
      }
      Vec<S> gamma_ij = solve_vec(m.metric, rhs);
      for (int k = 0; k < dim; ++k) conn.g(i, j, k) = gamma_ij[k];
    }

  // nabla g = 0
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k) {
        S resid = form_eval(m.metric, conn.derive_basis(i, j), basis_vec<S>(dim, k)) +
                  form_eval(m.metric, basis_vec<S>(dim, j), conn.derive_basis(i, k));
        if (!resid.is_zero())
          fail(ErrorKind::IdentityViolation, "metric compatibility at (" + std::to_string(i + 1) +
                                                 "," + std::to_string(j + 1) + "," +
                                                 std::to_string(k + 1) + ")");
      }
  // torsion = 0
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      Vec<S> t = vsub(vsub(conn.derive_basis(i, j), conn.derive_basis(j, i)), m.bracket_basis(i, j));
      if (!vec_is_zero(t))
        fail(ErrorKind::IdentityViolation,
             "torsion at (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
    }
  return conn;
}

// R_{e_i e_j} e_k = sum_l R[i][j][k][l] e_l, with the operator convention
// R_{XY} = [nabla_X, nabla_Y] - nabla_{[X,Y]} (the sign that puts the
// Sasakian catalog model at kappa = 1).
template <typename S>
struct CurvatureTensor {
  int dim = 0;
  std::vector<S> r;  // dim^4

  const S& at(int i, int j, int k, int l) const {
    return r[((i * dim + j) * dim + k) * dim + l];
  }
  S& at(int i, int j, int k, int l) { return r[((i * dim + j) * dim + k) * dim + l]; }

  Vec<S> apply_basis(int i, int j, int k) const {
    Vec<S> v(dim);
    for (int l = 0; l < dim; ++l) v[l] = at(i, j, k, l);
    return v;
  }

  // R_{XY} Z by multilinearity.
  Vec<S> apply(const Vec<S>& x, const Vec<S>& y, const Vec<S>& z) const {
    Vec<S> acc(dim, S(0));
    for (int i = 0; i < dim; ++i) {
      if (x[i].is_zero()) continue;
      for (int j = 0; j < dim; ++j) {
        if (y[j].is_zero()) continue;
        for (int k = 0; k < dim; ++k) {
          if (z[k].is_zero()) continue;
          S f = x[i] * y[j] * z[k];
          for (int l = 0; l < dim; ++l) acc[l] += f * at(i, j, k, l);
        }
      }
    }
    return acc;
  }
};

template <typename S>
CurvatureTensor<S> curvature(const Connection<S>& conn, const FrameModel<S>& m) {
  int dim = m.dim;
  CurvatureTensor<S> R;
  R.dim = dim;
  R.r.assign(static_cast<size_t>(dim) * dim * dim * dim, S(0));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k) {
        Vec<S> term = conn.derive(basis_vec<S>(dim, i), conn.derive_basis(j, k));
        term = vsub(term, conn.derive(basis_vec<S>(dim, j), conn.derive_basis(i, k)));
        term = vsub(term, conn.derive(m.bracket_basis(i, j), basis_vec<S>(dim, k)));
        for (int l = 0; l < dim; ++l) R.at(i, j, k, l) = term[l];
      }

  for (int i = 0; i < dim; ++i)
    for (int k = 0; k < dim; ++k)
      if (!vec_is_zero(R.apply_basis(i, i, k)))
        fail(ErrorKind::IdentityViolation, "curvature antisymmetry at (" + std::to_string(i + 1) +
                                               "," + std::to_string(k + 1) + ")");
  if (conn.source == ConnectionSource::levi_civita) {
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k) {
          Vec<S> b = vadd(vadd(R.apply_basis(i, j, k), R.apply_basis(j, k, i)),
                          R.apply_basis(k, i, j));
          if (!vec_is_zero(b))
            fail(ErrorKind::IdentityViolation, "first Bianchi at (" + std::to_string(i + 1) + "," +
                                                   std::to_string(j + 1) + "," +
                                                   std::to_string(k + 1) + ")");
        }
  }
  return R;
}

// (L_xi phi) as a frame matrix, column j = [xi, phi e_j] - phi [xi, e_j];
// this is the tensor 2h.
template <typename S>
Matrix<S> lie_derivative_phi(const FrameModel<S>& m) {
  int dim = m.dim;
  Matrix<S> out(dim, dim);
  for (int j = 0; j < dim; ++j) {
    Vec<S> phi_ej(dim);
    for (int k = 0; k < dim; ++k) phi_ej[k] = m.phi.at(k, j);
    Vec<S> col = vsub(bracket(m, m.xi, phi_ej), mat_vec(m.phi, bracket(m, m.xi, basis_vec<S>(dim, j))));
    for (int k = 0; k < dim; ++k) out.at(k, j) = col[k];
  }
  return out;
}

// --- covariant derivatives of the tensors the checks need -------------------
// Components are constant in the frame, so only the Gamma terms survive.

template <typename S>
Vec<S> cov_deriv_vec(const Connection<S>& conn, int i, const Vec<S>& v) {
  return conn.derive(basis_vec<S>(conn.dim, i), v);
}

// (nabla_{e_i} w)(e_j) = -w(nabla_{e_i} e_j) for a covector w.
template <typename S>
Vec<S> cov_deriv_covec(const Connection<S>& conn, int i, const Vec<S>& w) {
  int dim = conn.dim;
  Vec<S> out(dim, S(0));
  for (int j = 0; j < dim; ++j) {
    S acc(0);
    for (int k = 0; k < dim; ++k) acc += w[k] * conn.g(i, j, k);
    out[j] = -acc;
  }
  return out;
}

// (nabla_{e_i} B)(e_j, e_k) = -B(nabla_i e_j, e_k) - B(e_j, nabla_i e_k).
template <typename S>
Matrix<S> cov_deriv_bilinear(const Connection<S>& conn, int i, const Matrix<S>& b) {
  int dim = conn.dim;
  Matrix<S> out(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int k = 0; k < dim; ++k) {
      S acc(0);
      for (int l = 0; l < dim; ++l)
        acc += conn.g(i, j, l) * b.at(l, k) + conn.g(i, k, l) * b.at(j, l);
      out.at(j, k) = -acc;
    }
  return out;
}

// (nabla_{e_i} A) e_j = nabla_i(A e_j) - A(nabla_i e_j) for an endomorphism A.
template <typename S>
Matrix<S> cov_deriv_endo(const Connection<S>& conn, int i, const Matrix<S>& a) {
  int dim = conn.dim;
  Matrix<S> out(dim, dim);
  for (int j = 0; j < dim; ++j) {
    Vec<S> a_ej(dim);
    for (int k = 0; k < dim; ++k) a_ej[k] = a.at(k, j);
    Vec<S> col = vsub(cov_deriv_vec(conn, i, a_ej), mat_vec(a, conn.derive_basis(i, j)));
    for (int k = 0; k < dim; ++k) out.at(k, j) = col[k];
  }
  return out;
}

}  // namespace kmu

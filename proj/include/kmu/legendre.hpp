#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kmu/contact.hpp"

namespace kmu {

// n-dimensional subbundle of the contact distribution on which d_eta
// vanishes, given by a basis of constant frame vectors.
template <typename S>
struct LegendreBundle {
  std::vector<Vec<S>> basis;

  int n() const { return static_cast<int>(basis.size()); }
};

template <typename S>
std::optional<Vec<S>> span_coords(const Matrix<S>& basis_mat, const Vec<S>& v) {
  try {
    return solve_vec(basis_mat, v);
  } catch (const Error&) {
    return std::nullopt;
  }
}

template <typename S>
Matrix<S> bundle_matrix(const LegendreBundle<S>& f, int dim) {
  return columns_to_matrix(f.basis, dim);
}

template <typename S>
LegendreBundle<S> make_legendre(const FrameModel<S>& m, std::vector<Vec<S>> basis) {
  int dim = m.dim;
  if (static_cast<int>(basis.size()) != m.n())
    fail(ErrorKind::InvariantViolation, "Legendre bundle must have dimension n = " +
                                            std::to_string(m.n()));
  Matrix<S> bm = columns_to_matrix(basis, dim);
  if (rank(bm) != m.n()) fail(ErrorKind::InvariantViolation, "Legendre basis is not independent");
  Matrix<S> de = d_eta(m);
  for (size_t a = 0; a < basis.size(); ++a) {
    if (!m.eta_of(basis[a]).is_zero())
      fail(ErrorKind::InvariantViolation, "eta does not vanish on the bundle");
    for (size_t b = 0; b < basis.size(); ++b)
      if (!form_eval(de, basis[a], basis[b]).is_zero())
        fail(ErrorKind::InvariantViolation, "d_eta does not vanish on the bundle");
  }
  return LegendreBundle<S>{std::move(basis)};
}

// Pang form Pi(X, X') = 2 d_eta([xi, X], X') on bundle basis pairs. The form
// is symmetric for every Legendre bundle, so asymmetry is an engine-bug sentinel.
template <typename S>
Matrix<S> pang_form(const FrameModel<S>& m, const LegendreBundle<S>& f) {
  int n = f.n();
  Matrix<S> de = d_eta(m);
  Matrix<S> pi(n, n);
  for (int a = 0; a < n; ++a) {
    Vec<S> lie = bracket(m, m.xi, f.basis[a]);
    for (int b = 0; b < n; ++b) pi.at(a, b) = S(2) * form_eval(de, lie, f.basis[b]);
  }
  if (!pi.is_symmetric()) fail(ErrorKind::AsymmetryDetected, "Pang form is not symmetric");
  return pi;
}

// Definiteness by exact eigenvalue sign counts; flat is verified both as
// Pi = 0 and through the bracket criterion [xi, X] in TF, which must agree.
template <typename S>
PangClass pang_classify(const Matrix<S>& pi, const FrameModel<S>& m, const LegendreBundle<S>& f) {
  if (!pi.is_symmetric()) fail(ErrorKind::AsymmetryDetected, "Pang form is not symmetric");
  bool flat_matrix = pi.is_zero();
  Matrix<S> bm = bundle_matrix(f, m.dim);
  bool flat_bracket = true;
  for (const Vec<S>& x : f.basis)
    if (!span_coords(bm, bracket(m, m.xi, x))) flat_bracket = false;
  if (flat_matrix != flat_bracket)
    fail(ErrorKind::FlatCriteriaDisagree,
         std::string("Pi ") + (flat_matrix ? "= 0" : "!= 0") + " but [xi,X] " +
             (flat_bracket ? "stays in" : "leaves") + " the bundle");
  if (flat_matrix) return PangClass::flat;
  Signature sig = symmetric_signature(pi);
  int n = f.n();
  if (sig.zero > 0) return PangClass::degenerate;
  if (sig.positive == n) return PangClass::positive_definite;
  if (sig.negative == n) return PangClass::negative_definite;
  return PangClass::indefinite;
}

// Libermann operator solved per frame vector from Pi(Lambda Z, X) = d_eta(Z, X),
// returned as a full-frame matrix. Verified: kernel contains TF + R xi,
// Lambda^2 = 0, Lambda[xi, X] = X/2, and rank n (surjectivity onto TF).
template <typename S>
Matrix<S> libermann_operator(const FrameModel<S>& m, const LegendreBundle<S>& f,
                             const Matrix<S>& pi) {
  int dim = m.dim, n = f.n();
  if (det(pi).is_zero())
    fail(ErrorKind::DegenerateForm, "Pang form is degenerate; no Libermann operator");
  Matrix<S> de = d_eta(m);
  Matrix<S> lam(dim, dim);
  for (int j = 0; j < dim; ++j) {
    Vec<S> rhs(n);
    for (int a = 0; a < n; ++a) rhs[a] = form_eval(de, basis_vec<S>(dim, j), f.basis[a]);
    Vec<S> coeff = solve_vec(pi, rhs);
    for (int a = 0; a < n; ++a)
      for (int k = 0; k < dim; ++k) lam.at(k, j) += coeff[a] * f.basis[a][k];
  }

  if (!vec_is_zero(mat_vec(lam, m.xi)))
    fail(ErrorKind::IdentityViolation, "Lambda(xi) != 0");
  for (const Vec<S>& x : f.basis) {
    if (!vec_is_zero(mat_vec(lam, x)))
      fail(ErrorKind::IdentityViolation, "Lambda does not vanish on TF");
    Vec<S> half = vscale(S(1) / S(2), x);
    if (!vec_equal(mat_vec(lam, bracket(m, m.xi, x)), half))
      fail(ErrorKind::IdentityViolation, "Lambda[xi,X] != X/2");
  }
  if (!(lam * lam).is_zero()) fail(ErrorKind::IdentityViolation, "Lambda^2 != 0");
  if (rank(lam) != n) fail(ErrorKind::IdentityViolation, "Lambda is not surjective onto TF");
  return lam;
}

template <typename S>
struct FoliationData {
  LegendreBundle<S> bundle;
  Matrix<S> pi;                        // in bundle basis
  PangClass pang = PangClass::flat;
  std::optional<Matrix<S>> lambda_op;  // full frame; only when Pi is non-degenerate
  std::optional<Matrix<S>> pi_bar;     // full frame; only when Pi is non-degenerate
};

// Literal two-branch extension: Pi(Z,Z') when both arguments lie in TF,
// Pi(Lambda Z, Lambda Z') otherwise (including mixed pairs, where it is 0).
template <typename S>
S pi_bar_eval(const FrameModel<S>& m, const FoliationData<S>& f, const Vec<S>& z, const Vec<S>& zp) {
  Matrix<S> bm = bundle_matrix(f.bundle, m.dim);
  auto cz = span_coords(bm, z);
  auto czp = span_coords(bm, zp);
  auto eval_pi = [&](const Vec<S>& ca, const Vec<S>& cb) {
    S acc(0);
    for (int a = 0; a < f.bundle.n(); ++a)
      for (int b = 0; b < f.bundle.n(); ++b) acc += ca[a] * f.pi.at(a, b) * cb[b];
    return acc;
  };
  if (cz && czp) return eval_pi(*cz, *czp);
  if (!f.lambda_op) fail(ErrorKind::DegenerateForm, "extended Pang form needs a Libermann operator");
  Vec<S> lz = mat_vec(*f.lambda_op, z);
  Vec<S> lzp = mat_vec(*f.lambda_op, zp);
  auto clz = span_coords(bm, lz);
  auto clzp = span_coords(bm, lzp);
  if (!clz || !clzp) fail(ErrorKind::IdentityViolation, "Lambda image left the bundle");
  return eval_pi(*clz, *clzp);
}

template <typename S>
Matrix<S> extended_pang(const FrameModel<S>& m, const FoliationData<S>& f) {
  Matrix<S> out(m.dim, m.dim);
  for (int i = 0; i < m.dim; ++i)
    for (int j = 0; j < m.dim; ++j)
      out.at(i, j) = pi_bar_eval(m, f, basis_vec<S>(m.dim, i), basis_vec<S>(m.dim, j));
  return out;
}

template <typename S>
FoliationData<S> make_foliation(const FrameModel<S>& m, std::vector<Vec<S>> basis) {
  FoliationData<S> f;
  f.bundle = make_legendre(m, std::move(basis));
  f.pi = pang_form(m, f.bundle);
  f.pang = pang_classify(f.pi, m, f.bundle);
  if (f.pang == PangClass::positive_definite || f.pang == PangClass::negative_definite ||
      f.pang == PangClass::indefinite) {
    f.lambda_op = libermann_operator(m, f.bundle, f.pi);
    f.pi_bar = extended_pang(m, f);
  }
  return f;
}

// Decomposition TM = L1 + L2 + R xi with exact projections.
template <typename S>
struct FrameSplit {
  int dim = 0, n1 = 0, n2 = 0;
  std::vector<Vec<S>> basis1, basis2;
  Vec<S> xi;
  Matrix<S> inv;  // coordinates in the (L1, L2, xi) basis

  Vec<S> coords(const Vec<S>& v) const { return mat_vec(inv, v); }

  Vec<S> proj1(const Vec<S>& v) const {
    Vec<S> c = coords(v), out(dim, S(0));
    for (int a = 0; a < n1; ++a) out = vadd(out, vscale(c[a], basis1[a]));
    return out;
  }
  Vec<S> proj2(const Vec<S>& v) const {
    Vec<S> c = coords(v), out(dim, S(0));
    for (int b = 0; b < n2; ++b) out = vadd(out, vscale(c[n1 + b], basis2[b]));
    return out;
  }
  S eta_coeff(const Vec<S>& v) const { return coords(v)[n1 + n2]; }
};

template <typename S>
FrameSplit<S> make_split(const FrameModel<S>& m, const LegendreBundle<S>& f1,
                         const LegendreBundle<S>& f2) {
  FrameSplit<S> sp;
  sp.dim = m.dim;
  sp.n1 = f1.n();
  sp.n2 = f2.n();
  sp.basis1 = f1.basis;
  sp.basis2 = f2.basis;
  sp.xi = m.xi;
  std::vector<Vec<S>> all = f1.basis;
  all.insert(all.end(), f2.basis.begin(), f2.basis.end());
  all.push_back(m.xi);
  Matrix<S> b = columns_to_matrix(all, m.dim);
  if (static_cast<int>(all.size()) != m.dim || det(b).is_zero())
    fail(ErrorKind::PreconditionFailed, "bundles are not transverse (TM != L1 + L2 + R xi)");
  sp.inv = inverse(b);
  return sp;
}

template <typename S>
struct Tensor3 {
  int dim = 0;
  std::vector<S> t;  // dim^3

  const S& at(int i, int j, int k) const { return t[(i * dim + j) * dim + k]; }
  S& at(int i, int j, int k) { return t[(i * dim + j) * dim + k]; }
  Vec<S> slot(int i, int j) const {
    Vec<S> v(dim);
    for (int k = 0; k < dim; ++k) v[k] = at(i, j, k);
    return v;
  }
};

template <typename S>
struct BiLegendrianConnection {
  Connection<S> conn;
  Tensor3<S> torsion;
};

// The connection is pinned down by linear-solving its defining axioms over
// the frame:
//   (i)   nabla L1 in L1, nabla L2 in L2
//   (ii)  nabla xi = 0, nabla d_eta = 0
//   (iii) T(X,Y) = 2 d_eta(X,Y) xi on L1 x L2,
//         T(X,xi) = [xi, X_L1]_L2 + [xi, X_L2]_L1.
// The solver demands a unique solution (genuine almost bi-Legendrian inputs
// always admit exactly one; NoSolution / NonUniqueSolution are sentinels) and
// the resulting torsion is matched against
// its closed expression on every frame pair.
template <typename S>
BiLegendrianConnection<S> bilegendrian_connection(const FrameModel<S>& m,
                                                  const LegendreBundle<S>& f1,
                                                  const LegendreBundle<S>& f2) {
  int dim = m.dim;
  FrameSplit<S> sp = make_split(m, f1, f2);
  Matrix<S> de = d_eta(m);
  int unknowns = dim * dim * dim;
  auto idx = [dim](int i, int j, int k) { return (i * dim + j) * dim + k; };

  std::vector<Vec<S>> rows;
  Vec<S> rhs_list;
  auto new_row = [&]() -> Vec<S>& {
    rows.emplace_back(unknowns, S(0));
    rhs_list.push_back(S(0));
    return rows.back();
  };

  // (ii) nabla xi = 0
  for (int i = 0; i < dim; ++i)
    for (int k = 0; k < dim; ++k) {
      Vec<S>& row = new_row();
      for (int j = 0; j < dim; ++j)
        if (!m.xi[j].is_zero()) row[idx(i, j, k)] += m.xi[j];
    }

  // (i) invariance of both bundles: the L2- and xi-components (resp. L1, xi)
  // of nabla_{e_i} X vanish; components are read off through sp.inv.
  auto invariance_rows = [&](const std::vector<Vec<S>>& basis, int comp_lo, int comp_hi) {
    for (int i = 0; i < dim; ++i)
      for (const Vec<S>& x : basis)
        for (int comp = comp_lo; comp < comp_hi; ++comp) {
          Vec<S>& row = new_row();
          for (int j = 0; j < dim; ++j) {
            if (x[j].is_zero()) continue;
            for (int k = 0; k < dim; ++k) row[idx(i, j, k)] += x[j] * sp.inv.at(comp, k);
          }
        }
  };
  invariance_rows(f1.basis, sp.n1, dim);      // kill L2 and xi parts
  invariance_rows(f2.basis, 0, sp.n1);        // kill L1 part
  for (int i = 0; i < dim; ++i)               // kill xi part of nabla_{e_i} Y, Y in L2
    for (const Vec<S>& y : f2.basis) {
      Vec<S>& row = new_row();
      for (int j = 0; j < dim; ++j) {
        if (y[j].is_zero()) continue;
        for (int k = 0; k < dim; ++k) row[idx(i, j, k)] += y[j] * sp.inv.at(dim - 1, k);
      }
    }

  // (ii) nabla d_eta = 0
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = j + 1; k < dim; ++k) {
        Vec<S>& row = new_row();
        for (int l = 0; l < dim; ++l) {
          row[idx(i, j, l)] += de.at(l, k);
          row[idx(i, k, l)] += de.at(j, l);
        }
      }

  // (iii) on L1 x L2
  for (const Vec<S>& x : f1.basis)
    for (const Vec<S>& y : f2.basis) {
      Vec<S> rhs = vadd(bracket(m, x, y), vscale(S(2) * form_eval(de, x, y), m.xi));
      for (int k = 0; k < dim; ++k) {
        Vec<S>& row = new_row();
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j) {
            if (!x[i].is_zero() && !y[j].is_zero()) row[idx(i, j, k)] += x[i] * y[j];
            if (!y[i].is_zero() && !x[j].is_zero()) row[idx(i, j, k)] -= y[i] * x[j];
          }
        rhs_list.back() = rhs[k];
      }
    }

  // (iii) against xi: T(e_i, xi) = [xi, P1 e_i]_L2 + [xi, P2 e_i]_L1
  for (int i = 0; i < dim; ++i) {
    Vec<S> ei = basis_vec<S>(dim, i);
    Vec<S> want = vadd(sp.proj2(bracket(m, m.xi, sp.proj1(ei))),
                       sp.proj1(bracket(m, m.xi, sp.proj2(ei))));
    Vec<S> rhs = vadd(bracket(m, ei, m.xi), want);
    for (int k = 0; k < dim; ++k) {
      Vec<S>& row = new_row();
      for (int j = 0; j < dim; ++j) {
        if (!m.xi[j].is_zero()) {
          row[idx(i, j, k)] += m.xi[j];  // nabla_{e_i} xi
          row[idx(j, i, k)] -= m.xi[j];  // - nabla_xi e_i
        }
      }
      rhs_list.back() = rhs[k];
    }
  }

  Matrix<S> a(static_cast<int>(rows.size()), unknowns);
  Matrix<S> b(static_cast<int>(rows.size()), 1);
  for (size_t r = 0; r < rows.size(); ++r) {
    for (int c = 0; c < unknowns; ++c) a.at(static_cast<int>(r), c) = rows[r][c];
    b.at(static_cast<int>(r), 0) = rhs_list[r];
  }
  Matrix<S> sol;
  try {
    sol = solve_linear(a, b);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::SingularSystem)
      fail(ErrorKind::NonUniqueSolution, "bi-Legendrian axioms admit a solution family");
    if (e.kind() == ErrorKind::InconsistentSystem)
      fail(ErrorKind::NoSolution, "bi-Legendrian axioms are inconsistent");
    throw;
  }

  BiLegendrianConnection<S> out;
  out.conn.dim = dim;
  out.conn.source = ConnectionSource::bi_legendrian;
  out.conn.gamma.assign(static_cast<size_t>(unknowns), S(0));
  for (int u = 0; u < unknowns; ++u) out.conn.gamma[u] = sol.at(u, 0);

  out.torsion.dim = dim;
  out.torsion.t.assign(static_cast<size_t>(unknowns), S(0));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      Vec<S> t = vsub(vsub(out.conn.derive_basis(i, j), out.conn.derive_basis(j, i)),
                      m.bracket_basis(i, j));
      for (int k = 0; k < dim; ++k) out.torsion.at(i, j, k) = t[k];
    }

  // closed torsion expression on all frame pairs
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      Vec<S> x = basis_vec<S>(dim, i), y = basis_vec<S>(dim, j);
      Vec<S> x1 = sp.proj1(x), x2 = sp.proj2(x), y1 = sp.proj1(y), y2 = sp.proj2(y);
      Vec<S> want = vscale(S(-1), vadd(vadd(sp.proj2(bracket(m, x1, y1)),
                                            vscale(sp.eta_coeff(bracket(m, x1, y1)), m.xi)),
                                       vadd(sp.proj1(bracket(m, x2, y2)),
                                            vscale(sp.eta_coeff(bracket(m, x2, y2)), m.xi))));
      want = vadd(want, vscale(S(2) * form_eval(de, x, y), m.xi));
      Vec<S> tx = vadd(sp.proj2(bracket(m, m.xi, x1)), sp.proj1(bracket(m, m.xi, x2)));
      Vec<S> ty = vadd(sp.proj2(bracket(m, m.xi, y1)), sp.proj1(bracket(m, m.xi, y2)));
      want = vadd(want, vsub(vscale(m.eta_of(y), tx), vscale(m.eta_of(x), ty)));
      if (!vec_equal(out.torsion.slot(i, j), want))
        fail(ErrorKind::IdentityViolation, "bi-Legendrian torsion formula fails at (" +
                                               std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
    }
  return out;
}

enum class ParallelTensor { eta, d_eta, g, phi, h, pi_F1, pi_F2 };

inline const char* to_string(ParallelTensor t) {
  switch (t) {
    case ParallelTensor::eta: return "eta";
    case ParallelTensor::d_eta: return "d_eta";
    case ParallelTensor::g: return "g";
    case ParallelTensor::phi: return "phi";
    case ParallelTensor::h: return "h";
    case ParallelTensor::pi_F1: return "pi_F1";
    case ParallelTensor::pi_F2: return "pi_F2";
  }
  return "?";
}

struct ParallelResult {
  bool parallel = true;
  std::string max_residual_entry;  // empty when parallel
};

template <typename S>
struct ParallelContext {
  const ContactStructure<S>* structure = nullptr;
  const Matrix<S>* h = nullptr;
  const FoliationData<S>* f1 = nullptr;
  const FoliationData<S>* f2 = nullptr;
};

// Exact vanishing test of the covariant derivative of the named tensor in
// every frame direction.
template <typename S>
ParallelResult check_parallel(const FrameModel<S>& m, const BiLegendrianConnection<S>& bl,
                              ParallelTensor which, const ParallelContext<S>& ctx) {
  int dim = m.dim;
  ParallelResult res;
  auto record = [&](int i, const std::string& entry, const S& value) {
    if (!value.is_zero() && res.parallel) {
      res.parallel = false;
      res.max_residual_entry =
          "(nabla_e" + std::to_string(i + 1) + " " + to_string(which) + ")" + entry + " = " + value.str();
    }
  };

  if (which == ParallelTensor::pi_F1 || which == ParallelTensor::pi_F2) {
    const FoliationData<S>* f = which == ParallelTensor::pi_F1 ? ctx.f1 : ctx.f2;
    Matrix<S> bm = bundle_matrix(f->bundle, dim);
    int n = f->bundle.n();
    for (int i = 0; i < dim && res.parallel; ++i) {
      std::vector<Vec<S>> der(n);
      for (int a = 0; a < n; ++a) {
        auto c = span_coords(bm, bl.conn.derive(basis_vec<S>(dim, i), f->bundle.basis[a]));
        if (!c) {
          res.parallel = false;
          res.max_residual_entry = "nabla_e" + std::to_string(i + 1) + " leaves the bundle";
          break;
        }
        der[a] = *c;
      }
      if (!res.parallel) break;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          S acc(0);
          for (int c = 0; c < n; ++c) acc += der[a][c] * f->pi.at(c, b) + f->pi.at(a, c) * der[b][c];
          record(i, "(" + std::to_string(a + 1) + "," + std::to_string(b + 1) + ")", -acc);
        }
    }
    return res;
  }

  for (int i = 0; i < dim && res.parallel; ++i) {
    switch (which) {
      case ParallelTensor::eta: {
        Vec<S> d = cov_deriv_covec(bl.conn, i, ctx.structure->eta);
        for (int j = 0; j < dim; ++j) record(i, "(e" + std::to_string(j + 1) + ")", d[j]);
        break;
      }
      case ParallelTensor::d_eta: {
        Matrix<S> d = cov_deriv_bilinear(bl.conn, i, d_eta(m));
        for (int j = 0; j < dim; ++j)
          for (int k = 0; k < dim; ++k)
            record(i, "(" + std::to_string(j + 1) + "," + std::to_string(k + 1) + ")", d.at(j, k));
        break;
      }
      case ParallelTensor::g: {
        Matrix<S> d = cov_deriv_bilinear(bl.conn, i, ctx.structure->metric);
        for (int j = 0; j < dim; ++j)
          for (int k = 0; k < dim; ++k)
            record(i, "(" + std::to_string(j + 1) + "," + std::to_string(k + 1) + ")", d.at(j, k));
        break;
      }
      case ParallelTensor::phi: {
        Matrix<S> d = cov_deriv_endo(bl.conn, i, ctx.structure->phi);
        for (int j = 0; j < dim; ++j)
          for (int k = 0; k < dim; ++k)
            record(i, "(" + std::to_string(j + 1) + "," + std::to_string(k + 1) + ")", d.at(j, k));
        break;
      }
      case ParallelTensor::h: {
        Matrix<S> d = cov_deriv_endo(bl.conn, i, *ctx.h);
        for (int j = 0; j < dim; ++j)
          for (int k = 0; k < dim; ++k)
            record(i, "(" + std::to_string(j + 1) + "," + std::to_string(k + 1) + ")", d.at(j, k));
        break;
      }
      default:
        break;
    }
  }
  return res;
}

struct EquivalenceReport {
  bool metric_parallel = false;   // nabla^bl g = 0
  bool phi_parallel = false;      // nabla^bl phi = 0
  bool bracket_condition = false; // nabla^bl_X X' = -(phi[X,phi X'])_L etc. + h-invariance
};

// Evaluates the three equivalent characterizations independently on the
// conjugate pair (L, phi L) and insists they agree.
template <typename S>
EquivalenceReport conjugate_pair_equivalences(const FrameModel<S>& m, const ContactStructure<S>& st,
                                   const LegendreBundle<S>& l) {
  int dim = m.dim;
  std::vector<Vec<S>> q_basis;
  for (const Vec<S>& x : l.basis) q_basis.push_back(mat_vec(st.phi, x));
  LegendreBundle<S> q = make_legendre(m, q_basis);
  BiLegendrianConnection<S> bl = bilegendrian_connection(m, l, q);
  FrameSplit<S> sp = make_split(m, l, q);
  Matrix<S> h = compute_h(st, m);

  EquivalenceReport rep;
  ParallelContext<S> ctx;
  ctx.structure = &st;
  ctx.h = &h;
  rep.metric_parallel = check_parallel(m, bl, ParallelTensor::g, ctx).parallel;
  rep.phi_parallel = check_parallel(m, bl, ParallelTensor::phi, ctx).parallel;

  bool ok = true;
  for (const Vec<S>& x : l.basis)
    for (const Vec<S>& xp : l.basis) {
      Vec<S> lhs = bl.conn.derive(x, xp);
      Vec<S> rhs = vscale(S(-1), sp.proj1(mat_vec(st.phi, bracket(m, x, mat_vec(st.phi, xp)))));
      if (!vec_equal(lhs, rhs)) ok = false;
    }
  for (const Vec<S>& y : q.basis)
    for (const Vec<S>& yp : q.basis) {
      Vec<S> lhs = bl.conn.derive(y, yp);
      Vec<S> rhs = vscale(S(-1), sp.proj2(mat_vec(st.phi, bracket(m, y, mat_vec(st.phi, yp)))));
      if (!vec_equal(lhs, rhs)) ok = false;
    }
  Matrix<S> lm = bundle_matrix(l, dim), qm = bundle_matrix(q, dim);
  for (const Vec<S>& x : l.basis)
    if (!span_coords(lm, mat_vec(h, x))) ok = false;
  for (const Vec<S>& y : q.basis)
    if (!span_coords(qm, mat_vec(h, y))) ok = false;
  rep.bracket_condition = ok;

  if (rep.metric_parallel != rep.phi_parallel || rep.metric_parallel != rep.bracket_condition)
    fail(ErrorKind::EquivalenceViolation,
         std::string("equivalent conditions disagree: g ") + (rep.metric_parallel ? "par" : "not") +
             ", phi " + (rep.phi_parallel ? "par" : "not") + ", bracket " +
             (rep.bracket_condition ? "holds" : "fails"));
  return rep;
}

}  // namespace kmu

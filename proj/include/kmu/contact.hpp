#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kmu/tensor.hpp"

namespace kmu {

// (phi, xi, eta, g) in the frame of a host model. Synthesis produces new
// structures on the same frame, so the structure is kept separate from the
// bracket data.
template <typename S>
struct ContactStructure {
  Matrix<S> phi;
  Vec<S> xi;
  Vec<S> eta;
  Matrix<S> metric;
};

template <typename S>
ContactStructure<S> structure_of(const FrameModel<S>& m) {
  return ContactStructure<S>{m.phi, m.xi, m.eta, m.metric};
}

// Model carrying the same brackets but this structure's tensors; everything
// metric-dependent (Koszul, curvature) runs through this.
template <typename S>
FrameModel<S> with_structure(const FrameModel<S>& m, const ContactStructure<S>& st) {
  FrameModel<S> r = m;
  r.metric = st.metric;
  r.phi = st.phi;
  r.eta = st.eta;
  r.xi = st.xi;
  return r;
}

struct AxiomCheck {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct AxiomReport {
  std::vector<AxiomCheck> checks;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  std::string first_failure() const {
    for (const auto& c : checks)
      if (!c.pass) return c.name + (c.detail.empty() ? "" : " (" + c.detail + ")");
    return "";
  }
};

// Exact pass/fail per contact metric axiom, with the violating frame pair
// recorded on failure. Failures are report entries, not exceptions.
template <typename S>
AxiomReport verify_contact_metric(const ContactStructure<S>& st, const FrameModel<S>& m) {
  int dim = m.dim;
  AxiomReport rep;
  auto pair_str = [](int i, int j) {
    return "fails at (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
  };
  auto add = [&](const std::string& name, bool pass, const std::string& detail) {
    rep.checks.push_back({name, pass, pass ? "" : detail});
  };

  {
    S v(0);
    for (int k = 0; k < dim; ++k) v += st.eta[k] * st.xi[k];
    add("eta(xi)=1", v == S(1), "eta(xi) = " + v.str());
  }
  add("phi(xi)=0", vec_is_zero(mat_vec(st.phi, st.xi)), "phi(xi) != 0");
  {
    bool ok = true;
    int bad = 0;
    for (int j = 0; j < dim && ok; ++j) {
      S acc(0);
      for (int k = 0; k < dim; ++k) acc += st.eta[k] * st.phi.at(k, j);
      if (!acc.is_zero()) {
        ok = false;
        bad = j;
      }
    }
    add("eta.phi=0", ok, "fails at e" + std::to_string(bad + 1));
  }
  {
    Matrix<S> expected(dim, dim);
    for (int k = 0; k < dim; ++k)
      for (int j = 0; j < dim; ++j)
        expected.at(k, j) = (k == j ? S(-1) : S(0)) + st.xi[k] * st.eta[j];
    Matrix<S> got = st.phi * st.phi;
    bool ok = got == expected;
    std::string detail;
    if (!ok)
      for (int i = 0; i < dim && detail.empty(); ++i)
        for (int j = 0; j < dim && detail.empty(); ++j)
          if (got.at(i, j) != expected.at(i, j)) detail = pair_str(i, j);
    add("phi_squared", ok, detail);
  }
  {
    bool ok = true;
    std::string detail;
    for (int i = 0; i < dim && ok; ++i)
      for (int j = 0; j < dim && ok; ++j) {
        Vec<S> pi(dim), pj(dim);
        for (int k = 0; k < dim; ++k) {
          pi[k] = st.phi.at(k, i);
          pj[k] = st.phi.at(k, j);
        }
        S lhs = form_eval(st.metric, pi, pj);
        S rhs = form_eval(st.metric, basis_vec<S>(dim, i), basis_vec<S>(dim, j)) -
                st.eta[i] * st.eta[j];
        if (lhs != rhs) {
          ok = false;
          detail = pair_str(i, j);
        }
      }
    add("g_phi_compatibility", ok, detail);
  }
  {
    FrameModel<S> eff = with_structure(m, st);
    Matrix<S> de = d_eta(eff);
    bool ok = true;
    std::string detail;
    for (int i = 0; i < dim && ok; ++i)
      for (int j = 0; j < dim && ok; ++j) {
        Vec<S> pj(dim);
        for (int k = 0; k < dim; ++k) pj[k] = st.phi.at(k, j);
        if (de.at(i, j) != form_eval(st.metric, basis_vec<S>(dim, i), pj)) {
          ok = false;
          detail = pair_str(i, j);
        }
      }
    add("d_eta_compatibility", ok, detail);
  }
  return rep;
}

// h = (1/2) L_xi phi, with its standard identities re-verified exactly:
// g-symmetry, h xi = 0, eta o h = 0, h phi + phi h = 0, tr h = tr(phi h) = 0.
template <typename S>
Matrix<S> compute_h(const ContactStructure<S>& st, const FrameModel<S>& m) {
  FrameModel<S> eff = with_structure(m, st);
  Matrix<S> h = (S(1) / S(2)) * lie_derivative_phi(eff);
  int dim = m.dim;

  if (!vec_is_zero(mat_vec(h, st.xi))) fail(ErrorKind::IdentityViolation, "h(xi)=0");
  for (int j = 0; j < dim; ++j) {
    S acc(0);
    for (int k = 0; k < dim; ++k) acc += st.eta[k] * h.at(k, j);
    if (!acc.is_zero()) fail(ErrorKind::IdentityViolation, "eta.h=0");
  }
  if (!(h * st.phi + st.phi * h).is_zero())
    fail(ErrorKind::IdentityViolation, "h.phi+phi.h=0");
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      Vec<S> hi(dim), hj(dim);
      for (int k = 0; k < dim; ++k) {
        hi[k] = h.at(k, i);
        hj[k] = h.at(k, j);
      }
      if (form_eval(st.metric, hi, basis_vec<S>(dim, j)) !=
          form_eval(st.metric, basis_vec<S>(dim, i), hj))
        fail(ErrorKind::IdentityViolation, "g(hX,Y)=g(X,hY)");
    }
  S tr(0), trph(0);
  Matrix<S> ph = st.phi * h;
  for (int i = 0; i < dim; ++i) {
    tr += h.at(i, i);
    trph += ph.at(i, i);
  }
  if (!tr.is_zero()) fail(ErrorKind::IdentityViolation, "tr(h)=0");
  if (!trph.is_zero()) fail(ErrorKind::IdentityViolation, "tr(phi.h)=0");
  return h;
}

// N_phi(e_i, e_j) stored as a 3-index tensor.
template <typename S>
struct NijenhuisTensor {
  int dim = 0;
  std::vector<S> n;  // dim^3

  const S& at(int i, int j, int k) const { return n[(i * dim + j) * dim + k]; }
  S& at(int i, int j, int k) { return n[(i * dim + j) * dim + k]; }

  Vec<S> apply_basis(int i, int j) const {
    Vec<S> v(dim);
    for (int k = 0; k < dim; ++k) v[k] = at(i, j, k);
    return v;
  }
  Vec<S> apply(const Vec<S>& x, const Vec<S>& y) const {
    Vec<S> acc(dim, S(0));
    for (int i = 0; i < dim; ++i) {
      if (x[i].is_zero()) continue;
      for (int j = 0; j < dim; ++j) {
        if (y[j].is_zero()) continue;
        S f = x[i] * y[j];
        for (int k = 0; k < dim; ++k) acc[k] += f * at(i, j, k);
      }
    }
    return acc;
  }
  bool is_zero() const {
    return std::all_of(n.begin(), n.end(), [](const S& x) { return x.is_zero(); });
  }
};

// N_phi(X,Y) = phi^2[X,Y] + [phiX,phiY] - phi[phiX,Y] - phi[X,phiY] + 2 d_eta(X,Y) xi,
// with the two derived identities
//   phi N(X,Y) + N(phiX,Y) = 2 eta(X) h(Y)   and   eta(N(phiX,Y)) = 0
// re-verified on every frame pair.
template <typename S>
NijenhuisTensor<S> nijenhuis(const ContactStructure<S>& st, const FrameModel<S>& m) {
  FrameModel<S> eff = with_structure(m, st);
  int dim = m.dim;
  Matrix<S> de = d_eta(eff);
  Matrix<S> phi2 = st.phi * st.phi;
  NijenhuisTensor<S> N;
  N.dim = dim;
  N.n.assign(static_cast<size_t>(dim) * dim * dim, S(0));
  auto phi_col = [&](int j) {
    Vec<S> v(dim);
    for (int k = 0; k < dim; ++k) v[k] = st.phi.at(k, j);
    return v;
  };
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      Vec<S> term = mat_vec(phi2, m.bracket_basis(i, j));
      term = vadd(term, bracket(eff, phi_col(i), phi_col(j)));
      term = vsub(term, mat_vec(st.phi, bracket(eff, phi_col(i), basis_vec<S>(dim, j))));
      term = vsub(term, mat_vec(st.phi, bracket(eff, basis_vec<S>(dim, i), phi_col(j))));
      term = vadd(term, vscale(S(2) * de.at(i, j), st.xi));
      for (int k = 0; k < dim; ++k) N.at(i, j, k) = term[k];
    }

  Matrix<S> h = compute_h(st, m);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      Vec<S> lhs = vadd(mat_vec(st.phi, N.apply_basis(i, j)), N.apply(phi_col(i), basis_vec<S>(dim, j)));
      Vec<S> hj(dim);
      for (int k = 0; k < dim; ++k) hj[k] = h.at(k, j);
      if (!vec_equal(lhs, vscale(S(2) * st.eta[i], hj)))
        fail(ErrorKind::IdentityViolation, "phi.N(X,Y)+N(phiX,Y)=2eta(X)hY at (" +
                                               std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
      S e(0);
      Vec<S> nphix = N.apply(phi_col(i), basis_vec<S>(dim, j));
      for (int k = 0; k < dim; ++k) e += st.eta[k] * nphix[k];
      if (!e.is_zero())
        fail(ErrorKind::IdentityViolation, "eta(N(phiX,Y))=0 at (" + std::to_string(i + 1) + "," +
                                               std::to_string(j + 1) + ")");
    }
  return N;
}

template <typename S>
struct SasakianEvidence {
  bool value = false;
  bool nijenhuis_vanishes = false;
  bool covariant_identity = false;  // (nabla_X phi)Y = g(X,Y) xi - eta(Y) X
  bool curvature_identity = false;  // R_{XY} xi = eta(Y) X - eta(X) Y
};

// Three independent Sasakian criteria; they must agree, otherwise the engine
// itself is at fault (CriteriaDisagreement).
template <typename S>
SasakianEvidence<S> is_sasakian(const ContactStructure<S>& st, const FrameModel<S>& m) {
  FrameModel<S> eff = with_structure(m, st);
  int dim = m.dim;
  SasakianEvidence<S> ev;
  ev.nijenhuis_vanishes = nijenhuis(st, m).is_zero();

  Connection<S> lc = levi_civita(eff);
  ev.covariant_identity = true;
  for (int i = 0; i < dim && ev.covariant_identity; ++i) {
    Matrix<S> dphi = cov_deriv_endo(lc, i, st.phi);
    for (int j = 0; j < dim && ev.covariant_identity; ++j) {
      Vec<S> got(dim);
      for (int k = 0; k < dim; ++k) got[k] = dphi.at(k, j);
      S gij = form_eval(st.metric, basis_vec<S>(dim, i), basis_vec<S>(dim, j));
      Vec<S> want = vsub(vscale(gij, st.xi), vscale(st.eta[j], basis_vec<S>(dim, i)));
      if (!vec_equal(got, want)) ev.covariant_identity = false;
    }
  }

  CurvatureTensor<S> R = curvature(lc, eff);
  ev.curvature_identity = true;
  for (int i = 0; i < dim && ev.curvature_identity; ++i)
    for (int j = 0; j < dim && ev.curvature_identity; ++j) {
      Vec<S> got = R.apply(basis_vec<S>(dim, i), basis_vec<S>(dim, j), st.xi);
      Vec<S> want = vsub(vscale(st.eta[j], basis_vec<S>(dim, i)), vscale(st.eta[i], basis_vec<S>(dim, j)));
      if (!vec_equal(got, want)) ev.curvature_identity = false;
    }

  if (ev.nijenhuis_vanishes != ev.covariant_identity ||
      ev.nijenhuis_vanishes != ev.curvature_identity)
    fail(ErrorKind::CriteriaDisagreement,
         std::string("Sasakian criteria disagree: N_phi=") + (ev.nijenhuis_vanishes ? "0" : "!=0") +
             ", nabla_phi " + (ev.covariant_identity ? "matches" : "differs") + ", curvature " +
             (ev.curvature_identity ? "matches" : "differs"));
  ev.value = ev.nijenhuis_vanishes;
  return ev;
}

enum class PangClass { positive_definite, negative_definite, degenerate, flat, indefinite };

inline const char* to_string(PangClass c) {
  switch (c) {
    case PangClass::positive_definite: return "positive_definite";
    case PangClass::negative_definite: return "negative_definite";
    case PangClass::degenerate: return "degenerate";
    case PangClass::flat: return "flat";
    case PangClass::indefinite: return "indefinite";
  }
  return "?";
}

enum class ClassLabel { Sasakian, I, II, III, IV, V };

inline const char* to_string(ClassLabel c) {
  switch (c) {
    case ClassLabel::Sasakian: return "Sasakian";
    case ClassLabel::I: return "I";
    case ClassLabel::II: return "II";
    case ClassLabel::III: return "III";
    case ClassLabel::IV: return "IV";
    case ClassLabel::V: return "V";
  }
  return "?";
}

template <typename S>
struct KappaMuReport {
  S kappa;
  std::optional<S> mu;      // absent in the Sasakian case (undetermined)
  S lambda;                 // sqrt(1-kappa)
  std::optional<S> boeckx;  // absent in the Sasakian case
  ClassLabel label = ClassLabel::Sasakian;
  std::vector<Vec<S>> d_plus_basis;
  std::vector<Vec<S>> d_minus_basis;

  bool sasakian() const { return label == ClassLabel::Sasakian; }
};

// I_M = (1 - mu/2) / sqrt(1 - kappa); undefined at kappa = 1.
template <typename S>
S boeckx_invariant(const S& kappa, const S& mu) {
  if (kappa == S(1)) fail(ErrorKind::SasakianUndefined, "Boeckx invariant undefined at kappa=1");
  if (kappa > S(1)) fail(ErrorKind::ParameterOutOfRange, "kappa > 1");
  return (S(1) - mu / S(2)) / (S(1) - kappa).sqrt();
}

inline ClassLabel classify_by_invariant(int cmp_plus1, int cmp_minus1) {
  // cmp_plus1 = sign(I_M - 1), cmp_minus1 = sign(I_M + 1)
  if (cmp_plus1 > 0) return ClassLabel::I;
  if (cmp_plus1 == 0) return ClassLabel::IV;
  if (cmp_minus1 > 0) return ClassLabel::II;
  if (cmp_minus1 == 0) return ClassLabel::V;
  return ClassLabel::III;
}

template <typename S>
ClassLabel classify_by_invariant(const S& boeckx) {
  return classify_by_invariant((boeckx - S(1)).sign(), (boeckx + S(1)).sign());
}

// Pang classes of (D(lambda), D(-lambda)) demanded by each class.
inline std::pair<PangClass, PangClass> expected_pang_pair(ClassLabel label) {
  switch (label) {
    case ClassLabel::I: return {PangClass::positive_definite, PangClass::positive_definite};
    case ClassLabel::II: return {PangClass::positive_definite, PangClass::negative_definite};
    case ClassLabel::III: return {PangClass::negative_definite, PangClass::negative_definite};
    case ClassLabel::IV: return {PangClass::positive_definite, PangClass::flat};
    case ClassLabel::V: return {PangClass::flat, PangClass::negative_definite};
    case ClassLabel::Sasakian: break;
  }
  fail(ErrorKind::SasakianInput, "no Pang pair for the Sasakian class");
}

// Threshold label cross-validated against the observed Pang pair; a mismatch
// is an engine bug, never a property of the input.
template <typename S>
ClassLabel classify(const KappaMuReport<S>& report, PangClass pang_plus, PangClass pang_minus) {
  if (report.sasakian()) fail(ErrorKind::SasakianInput, "classify requires a non-Sasakian report");
  ClassLabel label = classify_by_invariant(*report.boeckx);
  auto expected = expected_pang_pair(label);
  if (expected.first != pang_plus || expected.second != pang_minus)
    fail(ErrorKind::ClassMismatch, std::string("threshold label ") + to_string(label) +
                                       " vs Pang pair (" + to_string(pang_plus) + ", " +
                                       to_string(pang_minus) + ")");
  return label;
}

namespace detail {

// Gram-Schmidt with respect to g, then unit normalization and
// first-nonzero-coefficient-positive sign fixing. When the exact norm is not
// a rational square the unit scaling would leave the field, so the vector is
// scaled to leading coefficient 1 instead; either way the output basis is
// deterministic.
template <typename S>
std::vector<Vec<S>> orthonormalize(const Matrix<S>& g, std::vector<Vec<S>> basis) {
  std::vector<Vec<S>> out;
  for (Vec<S> v : basis) {
    for (const Vec<S>& u : out) {
      S proj = form_eval(g, v, u) / form_eval(g, u, u);
      v = vsub(v, vscale(proj, u));
    }
    S norm2 = form_eval(g, v, v);
    if (norm2.sign() <= 0) fail(ErrorKind::SingularSystem, "degenerate basis");
    bool unit = false;
    if (norm2.is_rational()) {
      S root = norm2.sqrt();
      if (root.is_rational()) {
        v = vscale(root.inverse(), v);
        unit = true;
      }
    }
    for (const S& x : v) {
      if (x.is_zero()) continue;
      v = vscale(unit ? S(x.sign()) : x.inverse(), v);
      break;
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace detail

// Exact (kappa, mu) extraction. The two eigen-equations
//   R_{X xi} xi = (kappa + lambda mu) X   on D(lambda)
//   R_{Y xi} xi = (kappa - lambda mu) Y   on D(-lambda)
// give the candidate pair, which is then required to satisfy the nullity
// identity with zero residual on every frame pair. kappa <= 1 is enforced.
template <typename S>
KappaMuReport<S> fit_kappa_mu(const ContactStructure<S>& st, const FrameModel<S>& m) {
  FrameModel<S> eff = with_structure(m, st);
  int dim = m.dim;
  Matrix<S> h = compute_h(st, m);
  Connection<S> lc = levi_civita(eff);
  CurvatureTensor<S> R = curvature(lc, eff);

  KappaMuReport<S> rep;
  if (h.is_zero()) {
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        Vec<S> got = R.apply(basis_vec<S>(dim, i), basis_vec<S>(dim, j), st.xi);
        Vec<S> want =
            vsub(vscale(st.eta[j], basis_vec<S>(dim, i)), vscale(st.eta[i], basis_vec<S>(dim, j)));
        if (!vec_equal(got, want))
          fail(ErrorKind::NotNullity, "h=0 but the Sasakian curvature identity fails at (" +
                                          std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
      }
    rep.kappa = S(1);
    rep.lambda = S(0);
    rep.label = ClassLabel::Sasakian;
    return rep;
  }

  // lambda^2 from h^2 = (1-kappa) * (projector onto ker eta)
  Matrix<S> h2 = h * h;
  S lambda2(0);
  for (int i = 0; i < dim; ++i) lambda2 += h2.at(i, i);
  lambda2 /= S(dim - 1);
  Matrix<S> proj(dim, dim);
  for (int k = 0; k < dim; ++k)
    for (int j = 0; j < dim; ++j) proj.at(k, j) = (k == j ? S(1) : S(0)) - st.xi[k] * st.eta[j];
  if (h2 != lambda2 * proj)
    fail(ErrorKind::NotNullity, "h^2 is not a multiple of the projector onto the contact distribution");
  S lambda = lambda2.sqrt();

  Matrix<S> h_minus = h - lambda * Matrix<S>::identity(dim);
  Matrix<S> h_plus = h + lambda * Matrix<S>::identity(dim);
  std::vector<Vec<S>> d_plus = nullspace(h_minus);
  std::vector<Vec<S>> d_minus = nullspace(h_plus);
  int n = m.n();
  if (static_cast<int>(d_plus.size()) != n || static_cast<int>(d_minus.size()) != n)
    fail(ErrorKind::NotNullity, "eigenspaces of h do not split the contact distribution");
  d_plus = detail::orthonormalize(st.metric, d_plus);
  d_minus = detail::orthonormalize(st.metric, d_minus);

  for (const Vec<S>& x : d_plus)
    for (const Vec<S>& y : d_minus)
      if (!form_eval(st.metric, x, y).is_zero())
        fail(ErrorKind::IdentityViolation, "eigenspaces of h are not g-orthogonal");
  // phi maps D(lambda) into D(-lambda)
  {
    Matrix<S> minus_mat = columns_to_matrix(d_minus, dim);
    for (const Vec<S>& x : d_plus) {
      Vec<S> px = mat_vec(st.phi, x);
      try {
        solve_vec(minus_mat, px);
      } catch (const Error&) {
        fail(ErrorKind::IdentityViolation, "phi does not map D(lambda) onto D(-lambda)");
      }
    }
  }

  auto fit_on = [&](const std::vector<Vec<S>>& basis, const char* which) {
    std::optional<S> alpha;
    for (const Vec<S>& x : basis) {
      Vec<S> rx = R.apply(x, st.xi, st.xi);
      int lead = -1;
      for (int k = 0; k < dim; ++k)
        if (!x[k].is_zero()) {
          lead = k;
          break;
        }
      S a = rx[lead] / x[lead];
      if (!vec_equal(rx, vscale(a, x)))
        fail(ErrorKind::NonConstantFit,
             std::string("R_{X xi} xi is not proportional to X on ") + which);
      if (alpha && *alpha != a)
        fail(ErrorKind::NonConstantFit,
             std::string("inconsistent eigenvalue of R_{. xi} xi on ") + which);
      alpha = a;
    }
    return *alpha;
  };
  S alpha = fit_on(d_plus, "D(lambda)");
  S beta = fit_on(d_minus, "D(-lambda)");
  S kappa = (alpha + beta) / S(2);
  S mu = (alpha - beta) / (S(2) * lambda);

  if (lambda2 != S(1) - kappa)
    fail(ErrorKind::NotNullity, "h^2 = (kappa-1) phi^2 cross-check fails: lambda^2 != 1 - kappa");
  if (kappa > S(1)) fail(ErrorKind::NotNullity, "fitted kappa exceeds 1");

  // zero residual on all frame pairs
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      Vec<S> got = R.apply(basis_vec<S>(dim, i), basis_vec<S>(dim, j), st.xi);
      Vec<S> hi(dim), hj(dim);
      for (int k = 0; k < dim; ++k) {
        hi[k] = h.at(k, i);
        hj[k] = h.at(k, j);
      }
      Vec<S> want =
          vadd(vsub(vscale(kappa * st.eta[j], basis_vec<S>(dim, i)),
                    vscale(kappa * st.eta[i], basis_vec<S>(dim, j))),
               vsub(vscale(mu * st.eta[j], hi), vscale(mu * st.eta[i], hj)));
      if (!vec_equal(got, want))
        fail(ErrorKind::NotNullity, "nullity residual is nonzero at (" + std::to_string(i + 1) +
                                        "," + std::to_string(j + 1) + ")");
    }

  rep.kappa = kappa;
  rep.mu = mu;
  rep.lambda = lambda;
  rep.boeckx = boeckx_invariant(kappa, mu);
  rep.label = classify_by_invariant(*rep.boeckx);
  rep.d_plus_basis = std::move(d_plus);
  rep.d_minus_basis = std::move(d_minus);
  return rep;
}

}  // namespace kmu

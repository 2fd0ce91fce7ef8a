#pragma once

#include <optional>
#include <string>
#include <utility>

#include "kmu/legendre.hpp"

namespace kmu {

enum class SynthMode { ab, c };

template <typename S>
struct SynthesisParams {
  SynthMode mode = SynthMode::ab;
  S a, b;  // mode ab
  S c;     // mode c
};

// Rebuild the eigen-foliation pair (D(lambda), D(-lambda)) from a fitted
// report; all foliation invariants are re-validated on the way.
template <typename S>
std::pair<FoliationData<S>, FoliationData<S>> eigen_foliations(const FrameModel<S>& m,
                                                               const KappaMuReport<S>& report) {
  if (report.sasakian())
    fail(ErrorKind::SasakianInput, "a Sasakian structure has no eigen-foliation pair");
  return {make_foliation(m, report.d_plus_basis), make_foliation(m, report.d_minus_basis)};
}

namespace detail {

template <typename S>
void require_pi_parallel(const FrameModel<S>& m, const BiLegendrianConnection<S>& bl,
                         const FoliationData<S>& f1, const FoliationData<S>& f2, bool need_f1,
                         bool need_f2) {
  ParallelContext<S> ctx;
  ctx.f1 = &f1;
  ctx.f2 = &f2;
  if (need_f1 && !check_parallel(m, bl, ParallelTensor::pi_F1, ctx).parallel)
    fail(ErrorKind::PreconditionFailed, "Pang form of F1 is not parallel for the bi-Legendrian connection");
  if (need_f2 && !check_parallel(m, bl, ParallelTensor::pi_F2, ctx).parallel)
    fail(ErrorKind::PreconditionFailed, "Pang form of F2 is not parallel for the bi-Legendrian connection");
}

// A synthesis parameter obtained as a square root must live in the quadratic
// extension the fit already uses; a second radical would silently degrade
// exactness, so it is refused here (callers may retry on the float backend).
template <typename S>
void require_same_field(const S& root, const S& context, const char* what) {
  if constexpr (scalar_traits<S>::exact) {
    if (!root.is_rational() && !context.is_rational() &&
        root.discriminant() != context.discriminant())
      fail(ErrorKind::NestedRadical, std::string(what) + " = " + root.str() +
                                         " leaves the field Q(sqrt(" +
                                         context.discriminant().get_str() + "))");
  }
}

// Postcondition guard: the synthesized tensors must form a valid contact
// metric model on the same frame.
template <typename S>
void verify_synthesized(const FrameModel<S>& m, const ContactStructure<S>& st) {
  FrameModel<S> eff = with_structure(m, st);
  validate_model(eff);
  AxiomReport rep = verify_contact_metric(st, m);
  if (!rep.all_pass())
    fail(ErrorKind::IdentityViolation, "synthesized structure fails " + rep.first_failure());
}

}  // namespace detail

// Compatible structure from two definite foliations and admissible (a, b):
//   g = (1/a) Pi_F1 on F1xF1, (1/b) Pi_F2 on F2xF2, eta(x)eta elsewhere;
//   phi = -b Lambda_F2 on F1, -a Lambda_F1 on F2, 0 on xi.
// Hypotheses verified, never assumed: sign case against the Pang classes,
// bi-Legendrian parallelism of both Pang forms, and the extended-form
// proportionality PiBar_F1 = ab PiBar_F2 on TF1 (and symmetrically).
template <typename S>
ContactStructure<S> synthesize_ab(const FrameModel<S>& m, const FoliationData<S>& f1,
                                  const FoliationData<S>& f2, const S& a, const S& b) {
  int sa = a.sign(), sb = b.sign();
  if (sa == 0 || sb == 0) fail(ErrorKind::SignCaseMismatch, "a and b must be nonzero");
  if (sa < 0 && sb > 0) fail(ErrorKind::SignCaseMismatch, "a<0, b>0 is not an admissible sign case");
  auto definite = [](PangClass p) {
    return p == PangClass::positive_definite || p == PangClass::negative_definite;
  };
  if (!definite(f1.pang) || !definite(f2.pang))
    fail(ErrorKind::PreconditionFailed, "synthesize_ab requires two definite foliations, got (" +
                                            std::string(to_string(f1.pang)) + ", " +
                                            to_string(f2.pang) + ")");
  PangClass want1 = sa > 0 ? PangClass::positive_definite : PangClass::negative_definite;
  PangClass want2 = sb > 0 ? PangClass::positive_definite : PangClass::negative_definite;
  if (f1.pang != want1 || f2.pang != want2)
    fail(ErrorKind::SignCaseMismatch, std::string("signs (") + (sa > 0 ? "+" : "-") + "," +
                                          (sb > 0 ? "+" : "-") + ") do not match Pang classes (" +
                                          to_string(f1.pang) + ", " + to_string(f2.pang) + ")");

  BiLegendrianConnection<S> bl = bilegendrian_connection(m, f1.bundle, f2.bundle);
  detail::require_pi_parallel(m, bl, f1, f2, true, true);

  S ab = a * b;
  for (const Vec<S>& x : f1.bundle.basis)
    for (const Vec<S>& xp : f1.bundle.basis)
      if (pi_bar_eval(m, f1, x, xp) != ab * pi_bar_eval(m, f2, x, xp))
        fail(ErrorKind::PreconditionFailed,
             "extended Pang proportionality PiBar_F1 = ab PiBar_F2 fails on TF1");
  for (const Vec<S>& y : f2.bundle.basis)
    for (const Vec<S>& yp : f2.bundle.basis)
      if (pi_bar_eval(m, f2, y, yp) != ab * pi_bar_eval(m, f1, y, yp))
        fail(ErrorKind::PreconditionFailed,
             "extended Pang proportionality PiBar_F2 = ab PiBar_F1 fails on TF2");

  int dim = m.dim;
  FrameSplit<S> sp = make_split(m, f1.bundle, f2.bundle);
  ContactStructure<S> st;
  st.eta = m.eta;
  st.xi = m.xi;
  st.metric = Matrix<S>(dim, dim);
  int n1 = f1.bundle.n();
  for (int i = 0; i < dim; ++i) {
    Vec<S> ci = sp.coords(basis_vec<S>(dim, i));
    for (int j = 0; j < dim; ++j) {
      Vec<S> cj = sp.coords(basis_vec<S>(dim, j));
      S acc = m.eta[i] * m.eta[j];
      for (int p = 0; p < n1; ++p)
        for (int q = 0; q < n1; ++q) acc += ci[p] * f1.pi.at(p, q) * cj[q] / a;
      for (int p = 0; p < f2.bundle.n(); ++p)
        for (int q = 0; q < f2.bundle.n(); ++q)
          acc += ci[n1 + p] * f2.pi.at(p, q) * cj[n1 + q] / b;
      st.metric.at(i, j) = acc;
    }
  }
  st.phi = (-b) * (*f2.lambda_op) + (-a) * (*f1.lambda_op);

  detail::verify_synthesized(m, st);
  return st;
}

// Compatible structure for the half-flat cases. With F1 positive definite and
// F2 flat (c in (0,4]):
//   phi = (1/c) (Lambda_F1|_{TF2})^{-1} on F1, -c Lambda_F1 on F2, 0 on xi;
//   g   = (1/c) Pi_F1 on F1xF1, c PiBar_F1 on F2xF2, eta(x)eta elsewhere.
// The mirrored case (F1 flat, F2 negative definite, c in [-4,0)) swaps the
// roles through Lambda_F2.
template <typename S>
ContactStructure<S> synthesize_c(const FrameModel<S>& m, const FoliationData<S>& f1,
                                 const FoliationData<S>& f2, const S& c) {
  bool case_iv = f1.pang == PangClass::positive_definite && f2.pang == PangClass::flat;
  bool case_v = f1.pang == PangClass::flat && f2.pang == PangClass::negative_definite;
  if (!case_iv && !case_v)
    fail(ErrorKind::PreconditionFailed,
         std::string("synthesize_c requires |I_M| = 1, i.e. one definite and one flat foliation; got (") +
             to_string(f1.pang) + ", " + to_string(f2.pang) + ")");
  if (case_iv && !(c > S(0) && c <= S(4)))
    fail(ErrorKind::ParameterOutOfRange, "c must lie in (0,4], got " + c.str());
  if (case_v && !(c >= S(-4) && c < S(0)))
    fail(ErrorKind::ParameterOutOfRange, "c must lie in [-4,0), got " + c.str());

  BiLegendrianConnection<S> bl = bilegendrian_connection(m, f1.bundle, f2.bundle);
  detail::require_pi_parallel(m, bl, f1, f2, case_iv, case_v);

  int dim = m.dim;
  FrameSplit<S> sp = make_split(m, f1.bundle, f2.bundle);
  const FoliationData<S>& fd = case_iv ? f1 : f2;    // the definite one
  const FoliationData<S>& ff = case_iv ? f2 : f1;    // the flat one
  const Matrix<S>& lam = *fd.lambda_op;
  int nd = fd.bundle.n(), nf = ff.bundle.n();

  // Lambda restricted to the flat bundle, as a matrix in the two bases;
  // its inverse realizes phi on the definite side.
  Matrix<S> bm_d = bundle_matrix(fd.bundle, dim);
  Matrix<S> restr(nd, nf);
  for (int b2 = 0; b2 < nf; ++b2) {
    auto coords = span_coords(bm_d, mat_vec(lam, ff.bundle.basis[b2]));
    if (!coords) fail(ErrorKind::IdentityViolation, "Lambda image left the bundle");
    for (int a2 = 0; a2 < nd; ++a2) restr.at(a2, b2) = (*coords)[a2];
  }
  Matrix<S> restr_inv = inverse(restr);  // definite basis -> flat basis

  auto phi_on_definite = [&](const Vec<S>& coords_d) {
    Vec<S> out(dim, S(0));
    for (int b2 = 0; b2 < nf; ++b2) {
      S acc(0);
      for (int a2 = 0; a2 < nd; ++a2) acc += restr_inv.at(b2, a2) * coords_d[a2];
      out = vadd(out, vscale(acc / c, ff.bundle.basis[b2]));
    }
    return out;
  };

  ContactStructure<S> st;
  st.eta = m.eta;
  st.xi = m.xi;
  st.phi = Matrix<S>(dim, dim);
  st.metric = Matrix<S>(dim, dim);
  for (int j = 0; j < dim; ++j) {
    Vec<S> cj = sp.coords(basis_vec<S>(dim, j));
    Vec<S> coords_d(nd), col(dim, S(0));
    int off_d = case_iv ? 0 : sp.n1;
    for (int a2 = 0; a2 < nd; ++a2) coords_d[a2] = cj[off_d + a2];
    col = vadd(col, phi_on_definite(coords_d));                       // definite part
    col = vadd(col, vscale(-c, mat_vec(lam, basis_vec<S>(dim, j))));  // flat part via Lambda
    for (int k = 0; k < dim; ++k) st.phi.at(k, j) = col[k];
  }
  for (int i = 0; i < dim; ++i) {
    Vec<S> ci = sp.coords(basis_vec<S>(dim, i));
    Vec<S> pd_i(nd);
    int off_d = case_iv ? 0 : sp.n1;
    for (int a2 = 0; a2 < nd; ++a2) pd_i[a2] = ci[off_d + a2];
    Vec<S> pf_i = case_iv ? sp.proj2(basis_vec<S>(dim, i)) : sp.proj1(basis_vec<S>(dim, i));
    for (int j = 0; j < dim; ++j) {
      Vec<S> cj = sp.coords(basis_vec<S>(dim, j));
      Vec<S> pd_j(nd);
      for (int a2 = 0; a2 < nd; ++a2) pd_j[a2] = cj[off_d + a2];
      Vec<S> pf_j = case_iv ? sp.proj2(basis_vec<S>(dim, j)) : sp.proj1(basis_vec<S>(dim, j));
      S acc = m.eta[i] * m.eta[j];
      for (int p = 0; p < nd; ++p)
        for (int q = 0; q < nd; ++q) acc += pd_i[p] * fd.pi.at(p, q) * pd_j[q] / c;
      acc += c * pi_bar_eval(m, fd, pf_i, pf_j);
      st.metric.at(i, j) = acc;
    }
  }

  detail::verify_synthesized(m, st);
  return st;
}

template <typename S>
struct AdmissibleParams {
  SynthMode mode = SynthMode::ab;
  std::optional<S> ab_product;
  int sign_a = 0, sign_b = 0;
  std::optional<std::pair<S, S>> c_range;  // half-open at zero, closed at +-4

  std::string describe() const {
    if (mode == SynthMode::ab) {
      auto s = [](int v) { return v > 0 ? "> 0" : "< 0"; };
      return "ab = " + ab_product->str() + " with a " + s(sign_a) + ", b " + s(sign_b);
    }
    if (c_range->second.sign() > 0) return "c in (0, 4]";
    return "c in [-4, 0)";
  }
};

// Admissible synthesis parameters for a fitted structure:
// ab = (2-mu)^2 - 4(1-kappa) with the class sign case when |I_M| != 1,
// c in (0,4] when I_M = 1, c in [-4,0) when I_M = -1.
template <typename S>
AdmissibleParams<S> admissible_params(const KappaMuReport<S>& report) {
  if (report.sasakian()) fail(ErrorKind::SasakianInput, "Sasakian structures admit no (a,b) family");
  const S& kappa = report.kappa;
  const S& mu = *report.mu;
  AdmissibleParams<S> out;
  switch (report.label) {
    case ClassLabel::I:
      out.sign_a = out.sign_b = 1;
      break;
    case ClassLabel::II:
      out.sign_a = 1;
      out.sign_b = -1;
      break;
    case ClassLabel::III:
      out.sign_a = out.sign_b = -1;
      break;
    case ClassLabel::IV:
      out.mode = SynthMode::c;
      out.c_range = {S(0), S(4)};
      return out;
    case ClassLabel::V:
      out.mode = SynthMode::c;
      out.c_range = {S(-4), S(0)};
      return out;
    case ClassLabel::Sasakian:
      break;
  }
  out.ab_product = (S(2) - mu) * (S(2) - mu) - S(4) * (S(1) - kappa);
  return out;
}

// Parameters that reproduce the input structure bit-exactly:
// a = 2 lambda - mu + 2, b = -2 lambda - mu + 2 (one of them is the c value
// in the half-flat classes).
template <typename S>
SynthesisParams<S> roundtrip_params(const KappaMuReport<S>& report) {
  if (report.sasakian()) fail(ErrorKind::SasakianInput, "nothing to reproduce: structure is Sasakian");
  const S& mu = *report.mu;
  S a = S(2) * report.lambda - mu + S(2);
  S b = S(-2) * report.lambda - mu + S(2);
  SynthesisParams<S> p;
  if (report.label == ClassLabel::IV) {
    p.mode = SynthMode::c;
    p.c = a;
  } else if (report.label == ClassLabel::V) {
    p.mode = SynthMode::c;
    p.c = b;
  } else {
    p.mode = SynthMode::ab;
    p.a = a;
    p.b = b;
  }
  return p;
}

// Sasakian compatible structure for |I_M| > 1: a = b = +-sqrt((2-mu)^2 - 4(1-kappa)),
// the root sign matching the common definiteness of the two foliations. The
// square root may leave the scalar field (NestedRadical); callers may retry
// on the float backend.
template <typename S>
ContactStructure<S> sasakianize(const FrameModel<S>& m, const KappaMuReport<S>& report) {
  if (report.sasakian()) fail(ErrorKind::SasakianInput, "structure is already Sasakian");
  const S& im = *report.boeckx;
  if (!(im > S(1) || im < S(-1)))
    fail(ErrorKind::InvariantTooSmall, "sasakianize requires |I_M| > 1, got I_M = " + im.str());
  auto [f1, f2] = eigen_foliations(m, report);
  S radicand = (S(2) - *report.mu) * (S(2) - *report.mu) - S(4) * (S(1) - report.kappa);
  S s = radicand.sqrt();
  detail::require_same_field(s, report.lambda, "a = b");
  if (report.label == ClassLabel::III) s = -s;
  return synthesize_ab(m, f1, f2, s, s);
}

// Structure fitting (kappa', 2) for |I_M| < 1: a = -b = sqrt(4(1-kappa) - (2-mu)^2),
// so that ab = (2-mu)^2 - 4(1-kappa) < 0 as the mixed sign case requires.
template <typename S>
ContactStructure<S> tw_parallelize(const FrameModel<S>& m, const KappaMuReport<S>& report) {
  if (report.sasakian()) fail(ErrorKind::SasakianInput, "structure is Sasakian");
  const S& im = *report.boeckx;
  if (!(im > S(-1) && im < S(1)))
    fail(ErrorKind::InvariantTooLarge, "tw_parallelize requires |I_M| < 1, got I_M = " + im.str());
  auto [f1, f2] = eigen_foliations(m, report);
  S radicand = S(4) * (S(1) - report.kappa) - (S(2) - *report.mu) * (S(2) - *report.mu);
  S a = radicand.sqrt();
  detail::require_same_field(a, report.lambda, "a = -b");
  return synthesize_ab(m, f1, f2, a, -a);
}

}  // namespace kmu

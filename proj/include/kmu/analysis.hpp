#pragma once

#include <optional>
#include <string>

#include "kmu/synthesis.hpp"

namespace kmu {

// Identity checks beyond the bare axioms, each reported as a named entry.
// Exceptions from the constructive checks are converted to failed entries so
// the verifier can always produce a complete report.
template <typename S>
AxiomReport verify_suite(const ContactStructure<S>& st, const FrameModel<S>& m) {
  AxiomReport rep = verify_contact_metric(st, m);
  bool axioms_ok = rep.all_pass();
  auto guarded = [&](const std::string& name, auto&& fn) {
    if (!axioms_ok) return;  // identity checks presuppose the axioms
    try {
      fn();
      rep.checks.push_back({name, true, ""});
    } catch (const Error& e) {
      rep.checks.push_back({name, false, e.detail()});
    }
  };

  guarded("h_identities", [&] { compute_h(st, m); });
  guarded("nijenhuis_identities", [&] { nijenhuis(st, m); });
  guarded("levi_civita", [&] {
    FrameModel<S> eff = with_structure(m, st);
    Connection<S> lc = levi_civita(eff);
    curvature(lc, eff);  // antisymmetry + first Bianchi
  });
  guarded("nabla_xi=-phi-phi.h", [&] {
    FrameModel<S> eff = with_structure(m, st);
    Connection<S> lc = levi_civita(eff);
    Matrix<S> h = compute_h(st, m);
    Matrix<S> want = -(st.phi + st.phi * h);
    for (int i = 0; i < m.dim; ++i) {
      Vec<S> got = lc.derive(basis_vec<S>(m.dim, i), st.xi);
      Vec<S> w(m.dim);
      for (int k = 0; k < m.dim; ++k) w[k] = want.at(k, i);
      if (!vec_equal(got, w))
        fail(ErrorKind::IdentityViolation, "fails at e" + std::to_string(i + 1));
    }
  });
  guarded("sasakian_criteria_agree", [&] { is_sasakian(st, m); });
  return rep;
}

// Everything classify needs: the fitted report, the eigen-foliation pair with
// their Pang data, and the cross-validated class label.
template <typename S>
struct Analysis {
  KappaMuReport<S> km;
  std::optional<FoliationData<S>> f_plus, f_minus;
};

template <typename S>
Analysis<S> analyze(const ContactStructure<S>& st, const FrameModel<S>& m) {
  Analysis<S> out;
  out.km = fit_kappa_mu(st, m);
  if (!out.km.sasakian()) {
    out.f_plus = make_foliation(m, out.km.d_plus_basis);
    out.f_minus = make_foliation(m, out.km.d_minus_basis);
    out.km.label = classify(out.km, out.f_plus->pang, out.f_minus->pang);
  }
  return out;
}

}  // namespace kmu

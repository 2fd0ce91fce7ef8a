#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kmu/analysis.hpp"

namespace kmu {

// Machine-readable report. Every numeric field is carried as its exact string
// serialization; the float backend serializes shortest-round-trip decimals.

struct KappaMuBlock {
  std::string kappa;
  std::optional<std::string> mu;
  std::string lambda;
  std::optional<std::string> boeckx;
  std::string class_label;
  std::vector<std::vector<std::string>> d_plus_basis, d_minus_basis;
};

struct PangBlock {
  std::string pang_class;
  std::vector<std::vector<std::string>> pi;
};

struct SynthesisBlock {
  std::string mode;  // ab | c | sasakianize | tw-parallel | roundtrip
  std::optional<std::string> a, b, c;
  std::string admissible;
  std::optional<std::string> output_path;
  std::optional<KappaMuBlock> fitted;  // fit of the synthesized structure
  std::optional<bool> sasakian;
};

struct Report {
  std::string model_id;
  std::string backend = "exact";
  std::optional<double> tolerance;  // float backend only
  std::vector<AxiomCheck> axiom_results;
  std::optional<KappaMuBlock> kappa_mu;
  bool not_kappa_mu = false;
  std::optional<PangBlock> pang_plus, pang_minus;
  std::optional<SynthesisBlock> synthesis;
  std::vector<std::string> warnings;
  std::optional<std::pair<std::string, std::string>> error;  // kind, detail

  bool axioms_pass() const {
    for (const auto& c : axiom_results)
      if (!c.pass) return false;
    return true;
  }
};

namespace detail {

template <typename S>
std::vector<std::vector<std::string>> basis_strings(const std::vector<Vec<S>>& basis) {
  std::vector<std::vector<std::string>> out;
  for (const Vec<S>& v : basis) {
    std::vector<std::string> row;
    for (const S& x : v) row.push_back(x.str());
    out.push_back(std::move(row));
  }
  return out;
}

template <typename S>
std::vector<std::vector<std::string>> matrix_strings(const Matrix<S>& m) {
  std::vector<std::vector<std::string>> out;
  for (int i = 0; i < m.rows(); ++i) {
    std::vector<std::string> row;
    for (int j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j).str());
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace detail

template <typename S>
KappaMuBlock kappa_mu_block(const KappaMuReport<S>& km) {
  KappaMuBlock b;
  b.kappa = km.kappa.str();
  if (km.mu) b.mu = km.mu->str();
  b.lambda = km.lambda.str();
  if (km.boeckx) b.boeckx = km.boeckx->str();
  b.class_label = to_string(km.label);
  b.d_plus_basis = detail::basis_strings(km.d_plus_basis);
  b.d_minus_basis = detail::basis_strings(km.d_minus_basis);
  return b;
}

template <typename S>
PangBlock pang_block(const FoliationData<S>& f) {
  return PangBlock{to_string(f.pang), detail::matrix_strings(f.pi)};
}

// --- JSON (schema "1") ------------------------------------------------------

inline json report_to_json(const Report& r) {
  json j = json::object();
  j["report_schema"] = "1";
  j["model_id"] = r.model_id;
  j["backend"] = r.backend;
  if (r.tolerance) j["tolerance"] = *r.tolerance;
  json ax = json::array();
  for (const auto& c : r.axiom_results) {
    json e = json::object();
    e["name"] = c.name;
    e["pass"] = c.pass;
    if (!c.pass) e["detail"] = c.detail;
    ax.push_back(e);
  }
  j["axiom_results"] = ax;
  auto km_json = [](const KappaMuBlock& b) {
    json k = json::object();
    k["kappa"] = b.kappa;
    if (b.mu) k["mu"] = *b.mu;
    k["lambda"] = b.lambda;
    if (b.boeckx) k["boeckx"] = *b.boeckx;
    k["class"] = b.class_label;
    k["d_plus_basis"] = b.d_plus_basis;
    k["d_minus_basis"] = b.d_minus_basis;
    return k;
  };
  if (r.kappa_mu) j["kappa_mu"] = km_json(*r.kappa_mu);
  if (r.not_kappa_mu) j["not_kappa_mu"] = true;
  if (r.pang_plus || r.pang_minus) {
    json p = json::object();
    auto pang_json = [](const PangBlock& b) {
      json q = json::object();
      q["pang_class"] = b.pang_class;
      q["pi"] = b.pi;
      return q;
    };
    if (r.pang_plus) p["d_plus"] = pang_json(*r.pang_plus);
    if (r.pang_minus) p["d_minus"] = pang_json(*r.pang_minus);
    j["pang"] = p;
  }
  if (r.synthesis) {
    const SynthesisBlock& s = *r.synthesis;
    json k = json::object();
    k["mode"] = s.mode;
    if (s.a) k["a"] = *s.a;
    if (s.b) k["b"] = *s.b;
    if (s.c) k["c"] = *s.c;
    if (!s.admissible.empty()) k["admissible"] = s.admissible;
    if (s.output_path) k["output"] = *s.output_path;
    if (s.fitted) k["fitted"] = km_json(*s.fitted);
    if (s.sasakian) k["sasakian"] = *s.sasakian;
    j["synthesis"] = k;
  }
  j["warnings"] = r.warnings;
  if (r.error) {
    json e = json::object();
    e["kind"] = r.error->first;
    e["detail"] = r.error->second;
    j["error"] = e;
  }
  return j;
}

inline Report report_from_json(const json& j) {
  Report r;
  if (j.value("report_schema", "") != "1")
    fail(ErrorKind::ParseError, "unsupported report_schema");
  r.model_id = j.at("model_id").get<std::string>();
  r.backend = j.at("backend").get<std::string>();
  if (j.contains("tolerance")) r.tolerance = j.at("tolerance").get<double>();
  for (const json& e : j.at("axiom_results")) {
    AxiomCheck c;
    c.name = e.at("name").get<std::string>();
    c.pass = e.at("pass").get<bool>();
    c.detail = e.value("detail", "");
    r.axiom_results.push_back(c);
  }
  auto km_parse = [](const json& k) {
    KappaMuBlock b;
    b.kappa = k.at("kappa").get<std::string>();
    if (k.contains("mu")) b.mu = k.at("mu").get<std::string>();
    b.lambda = k.at("lambda").get<std::string>();
    if (k.contains("boeckx")) b.boeckx = k.at("boeckx").get<std::string>();
    b.class_label = k.at("class").get<std::string>();
    b.d_plus_basis = k.at("d_plus_basis").get<std::vector<std::vector<std::string>>>();
    b.d_minus_basis = k.at("d_minus_basis").get<std::vector<std::vector<std::string>>>();
    return b;
  };
  if (j.contains("kappa_mu")) r.kappa_mu = km_parse(j.at("kappa_mu"));
  r.not_kappa_mu = j.value("not_kappa_mu", false);
  if (j.contains("pang")) {
    auto pang_parse = [](const json& q) {
      PangBlock b;
      b.pang_class = q.at("pang_class").get<std::string>();
      b.pi = q.at("pi").get<std::vector<std::vector<std::string>>>();
      return b;
    };
    if (j.at("pang").contains("d_plus")) r.pang_plus = pang_parse(j.at("pang").at("d_plus"));
    if (j.at("pang").contains("d_minus")) r.pang_minus = pang_parse(j.at("pang").at("d_minus"));
  }
  if (j.contains("synthesis")) {
    const json& k = j.at("synthesis");
    SynthesisBlock s;
    s.mode = k.at("mode").get<std::string>();
    if (k.contains("a")) s.a = k.at("a").get<std::string>();
    if (k.contains("b")) s.b = k.at("b").get<std::string>();
    if (k.contains("c")) s.c = k.at("c").get<std::string>();
    s.admissible = k.value("admissible", "");
    if (k.contains("output")) s.output_path = k.at("output").get<std::string>();
    if (k.contains("fitted")) s.fitted = km_parse(k.at("fitted"));
    if (k.contains("sasakian")) s.sasakian = k.at("sasakian").get<bool>();
    r.synthesis = s;
  }
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  if (j.contains("error"))
    r.error = {j.at("error").at("kind").get<std::string>(),
               j.at("error").at("detail").get<std::string>()};
  return r;
}

}  // namespace kmu

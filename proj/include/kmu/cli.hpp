#pragma once

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "kmu/report.hpp"

namespace kmu {
namespace cli {

struct Options {
  bool json = false;
  std::string backend = "exact";
  double tolerance = 1e-9;
  std::string filter;       // catalog: "class=IV"
  std::string export_dir;   // catalog: write model files
  std::string all_dir;      // verify: process every *.json in a directory
  std::string output_path;  // synthesize -o
  std::optional<std::string> a_str, b_str, c_str;
  bool sasakianize = false, tw_parallel = false, roundtrip = false;
};

// Exit codes: 0 all-pass, 1 verification/precondition failure, 2 I/O or usage.
enum ExitCode { exit_ok = 0, exit_fail = 1, exit_io = 2 };

namespace detail {

inline int error_exit_code(const Error& e) {
  return (e.kind() == ErrorKind::IoError || e.kind() == ErrorKind::ParseError) ? exit_io : exit_fail;
}

inline std::string model_id_of(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

template <typename S>
void set_backend_options(const Options& opt) {
  if constexpr (!scalar_traits<S>::exact) FloatScalar::tolerance = opt.tolerance;
}

template <typename S>
Report base_report(const std::string& model_id, const Options& opt) {
  Report r;
  r.model_id = model_id;
  r.backend = scalar_traits<S>::exact ? "exact" : "float";
  if (!scalar_traits<S>::exact) r.tolerance = opt.tolerance;
  return r;
}

inline void print_axioms_text(const Report& r, std::ostream& out) {
  int pass = 0;
  for (const auto& c : r.axiom_results)
    if (c.pass) ++pass;
  out << "model: " << r.model_id << " [" << r.backend << "]\n";
  out << "checks: " << pass << "/" << r.axiom_results.size() << " pass\n";
  for (const auto& c : r.axiom_results)
    if (!c.pass) out << "  FAIL " << c.name << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
}

inline void print_kappa_mu_text(const KappaMuBlock& b, std::ostream& out, const char* indent = "") {
  out << indent << "class = " << b.class_label << "  kappa = " << b.kappa;
  if (b.mu) out << "  mu = " << *b.mu;
  out << "  lambda = " << b.lambda;
  if (b.boeckx) out << "  I_M = " << *b.boeckx;
  out << "\n";
}

inline void emit(const Report& r, const Options& opt, std::ostream& out) {
  if (opt.json) {
    out << report_to_json(r).dump(2) << "\n";
    return;
  }
  print_axioms_text(r, out);
  if (r.kappa_mu) print_kappa_mu_text(*r.kappa_mu, out);
  if (r.not_kappa_mu) out << "not_kappa_mu: the nullity residual is nonzero\n";
  if (r.pang_plus) out << "Pang D(+lambda): " << r.pang_plus->pang_class << "\n";
  if (r.pang_minus) out << "Pang D(-lambda): " << r.pang_minus->pang_class << "\n";
  if (r.synthesis) {
    const auto& s = *r.synthesis;
    out << "synthesis mode = " << s.mode;
    if (s.a) out << "  a = " << *s.a;
    if (s.b) out << "  b = " << *s.b;
    if (s.c) out << "  c = " << *s.c;
    out << "\n";
    if (!s.admissible.empty()) out << "admissible: " << s.admissible << "\n";
    if (s.fitted) print_kappa_mu_text(*s.fitted, out, "fitted: ");
    if (s.sasakian) out << "sasakian: " << (*s.sasakian ? "yes" : "no") << "\n";
    if (s.output_path) out << "wrote " << *s.output_path << "\n";
  }
  for (const auto& w : r.warnings) out << "warning: " << w << "\n";
  if (r.error) out << "error " << r.error->first << ": " << r.error->second << "\n";
}

}  // namespace detail

// --- catalog ----------------------------------------------------------------

inline int cmd_catalog(const Options& opt, std::ostream& out) {
  auto entries = catalog<ExactScalar>();
  std::string want;
  if (!opt.filter.empty()) {
    if (opt.filter.rfind("class=", 0) != 0) {
      out << "error: unsupported filter \"" << opt.filter << "\" (expected class=<label>)\n";
      return exit_io;
    }
    want = opt.filter.substr(6);
  }
  json arr = json::array();
  for (const auto& e : entries) {
    if (!want.empty() && e.expected_class != want) continue;
    if (!opt.export_dir.empty()) {
      std::filesystem::create_directories(opt.export_dir);
      save_model(e.model, (std::filesystem::path(opt.export_dir) / (e.name + ".json")).string());
    }
    if (opt.json) {
      json j = json::object();
      j["name"] = e.name;
      j["class"] = e.expected_class;
      arr.push_back(j);
    } else {
      out << e.name << "  class=" << e.expected_class << "\n";
    }
  }
  if (opt.json) out << arr.dump(2) << "\n";
  if (!opt.export_dir.empty() && !opt.json) out << "exported to " << opt.export_dir << "\n";
  return exit_ok;
}

// --- verify -----------------------------------------------------------------

namespace detail {

template <typename S>
int verify_one(const std::string& path, const Options& opt, Report& r) {
  r = base_report<S>(model_id_of(path), opt);
  try {
    FrameModel<S> m = load_model<S>(path);
    r.axiom_results = verify_suite(structure_of(m), m).checks;
    return r.axioms_pass() ? exit_ok : exit_fail;
  } catch (const Error& e) {
    r.error = {to_string(e.kind()), e.detail()};
    return error_exit_code(e);
  }
}

template <typename S>
int verify_impl(const std::string& path, const Options& opt, std::ostream& out) {
  set_backend_options<S>(opt);
  if (opt.all_dir.empty()) {
    Report r;
    int code = verify_one<S>(path, opt, r);
    emit(r, opt, out);
    return code;
  }
  std::vector<std::string> files;
  try {
    for (const auto& entry : std::filesystem::directory_iterator(opt.all_dir))
      if (entry.path().extension() == ".json") files.push_back(entry.path().string());
  } catch (const std::filesystem::filesystem_error& e) {
    out << "error: " << e.what() << "\n";
    return exit_io;
  }
  std::sort(files.begin(), files.end());
  std::vector<Report> reports(files.size());
  std::vector<int> codes(files.size(), exit_ok);
  // models are independent; output stays in input order
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (size_t i = 0; i < files.size(); ++i) codes[i] = verify_one<S>(files[i], opt, reports[i]);
  if (opt.json) {
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(report_to_json(r));
    out << arr.dump(2) << "\n";
  } else {
    for (const auto& r : reports) emit(r, opt, out);
  }
  int worst = exit_ok;
  for (int c : codes) worst = std::max(worst, c);
  return worst;
}

}  // namespace detail

inline int cmd_verify(const std::string& path, const Options& opt, std::ostream& out) {
  if (opt.backend == "float") return detail::verify_impl<FloatScalar>(path, opt, out);
  return detail::verify_impl<ExactScalar>(path, opt, out);
}

// --- classify ----------------------------------------------------------------

namespace detail {

template <typename S>
int classify_impl(const std::string& path, const Options& opt, std::ostream& out) {
  set_backend_options<S>(opt);
  Report r = base_report<S>(model_id_of(path), opt);
  try {
    FrameModel<S> m = load_model<S>(path);
    ContactStructure<S> st = structure_of(m);
    r.axiom_results = verify_suite(st, m).checks;
    if (!r.axioms_pass()) {
      emit(r, opt, out);
      return exit_fail;
    }
    try {
      Analysis<S> an = analyze(st, m);
      r.kappa_mu = kappa_mu_block(an.km);
      if (an.f_plus) r.pang_plus = pang_block(*an.f_plus);
      if (an.f_minus) r.pang_minus = pang_block(*an.f_minus);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotNullity) throw;
      r.not_kappa_mu = true;
      r.error = {to_string(e.kind()), e.detail()};
      emit(r, opt, out);
      return exit_fail;
    }
    emit(r, opt, out);
    return exit_ok;
  } catch (const Error& e) {
    r.error = {to_string(e.kind()), e.detail()};
    emit(r, opt, out);
    return error_exit_code(e);
  }
}

}  // namespace detail

inline int cmd_classify(const std::string& path, const Options& opt, std::ostream& out) {
  if (opt.backend == "float") return detail::classify_impl<FloatScalar>(path, opt, out);
  return detail::classify_impl<ExactScalar>(path, opt, out);
}

// --- synthesize ---------------------------------------------------------------

namespace detail {

template <typename S>
int synthesize_impl(const std::string& path, const Options& opt, std::ostream& out,
                    std::vector<std::string> carried_warnings = {}) {
  set_backend_options<S>(opt);
  Report r = base_report<S>(model_id_of(path), opt);
  r.warnings = std::move(carried_warnings);
  int modes = int(opt.a_str.has_value() || opt.b_str.has_value()) + int(opt.c_str.has_value()) +
              int(opt.sasakianize) + int(opt.tw_parallel) + int(opt.roundtrip);
  if (modes != 1 || (opt.a_str.has_value() != opt.b_str.has_value())) {
    r.error = {"Usage", "select exactly one of --a/--b, --c, --sasakianize, --tw-parallel, --roundtrip"};
    emit(r, opt, out);
    return exit_io;
  }
  try {
    FrameModel<S> m = load_model<S>(path);
    ContactStructure<S> st = structure_of(m);
    r.axiom_results = verify_suite(st, m).checks;
    if (!r.axioms_pass()) {
      emit(r, opt, out);
      return exit_fail;
    }
    Analysis<S> an = analyze(st, m);
    r.kappa_mu = kappa_mu_block(an.km);

    SynthesisBlock sb;
    ContactStructure<S> built;
    if (!an.km.sasakian()) sb.admissible = admissible_params(an.km).describe();
    if (opt.a_str) {
      sb.mode = "ab";
      S a = S::parse(*opt.a_str), b = S::parse(*opt.b_str);
      sb.a = a.str();
      sb.b = b.str();
      built = synthesize_ab(m, *an.f_plus, *an.f_minus, a, b);
    } else if (opt.c_str) {
      sb.mode = "c";
      S c = S::parse(*opt.c_str);
      sb.c = c.str();
      built = synthesize_c(m, *an.f_plus, *an.f_minus, c);
    } else if (opt.sasakianize) {
      sb.mode = "sasakianize";
      built = sasakianize(m, an.km);
    } else if (opt.tw_parallel) {
      sb.mode = "tw-parallel";
      r.warnings.push_back(
          "tw-parallel parameter convention: the radicand (1-mu/2)^2-(1-kappa) is negative "
          "whenever |I_M|<1; parameters are taken as a=sqrt(4(1-kappa)-(2-mu)^2), b=-a so that "
          "ab=(2-mu)^2-4(1-kappa)");
      built = tw_parallelize(m, an.km);
    } else {
      SynthesisParams<S> p = roundtrip_params(an.km);
      sb.mode = "roundtrip";
      if (p.mode == SynthMode::ab) {
        sb.a = p.a.str();
        sb.b = p.b.str();
        built = synthesize_ab(m, *an.f_plus, *an.f_minus, p.a, p.b);
      } else {
        sb.c = p.c.str();
        built = synthesize_c(m, *an.f_plus, *an.f_minus, p.c);
      }
    }

    // verification block: fit and Sasakian test of the synthesized structure
    KappaMuReport<S> fitted = fit_kappa_mu(built, m);
    sb.fitted = kappa_mu_block(fitted);
    sb.sasakian = is_sasakian(built, m).value;
    if (!opt.output_path.empty()) {
      save_model(with_structure(m, built), opt.output_path);
      sb.output_path = opt.output_path;
    }
    r.synthesis = sb;
    emit(r, opt, out);
    return exit_ok;
  } catch (const Error& e) {
    if constexpr (scalar_traits<S>::exact) {
      if (e.kind() == ErrorKind::NestedRadical) {
        // parameters leave the quadratic extension; rerun on the float backend
        std::vector<std::string> w = r.warnings;
        w.push_back("exact synthesis requires a nested radical (" + e.detail() +
                    "); falling back to the float backend at tolerance " +
                    std::to_string(opt.tolerance));
        return synthesize_impl<FloatScalar>(path, opt, out, std::move(w));
      }
    }
    r.error = {to_string(e.kind()), e.detail()};
    emit(r, opt, out);
    return error_exit_code(e);
  }
}

}  // namespace detail

inline int cmd_synthesize(const std::string& path, const Options& opt, std::ostream& out) {
  if (opt.backend == "float") return detail::synthesize_impl<FloatScalar>(path, opt, out);
  return detail::synthesize_impl<ExactScalar>(path, opt, out);
}

}  // namespace cli
}  // namespace kmu

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kmu/cli.hpp"
#include "oracle.hpp"

using namespace kmu;
using namespace kmu::cli;
using S = ExactScalar;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() / ("kmu_cli_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string run_catalog(Options opt, int* code = nullptr) {
  std::ostringstream out;
  int c = cmd_catalog(opt, out);
  if (code) *code = c;
  return out.str();
}

json run_json(int (*cmd)(const std::string&, const Options&, std::ostream&), const std::string& path,
              Options opt, int* code) {
  opt.json = true;
  std::ostringstream out;
  *code = cmd(path, opt, out);
  return json::parse(out.str());
}

}  // namespace

TEST_CASE("catalog listing and filter") {
  int code = 0;
  Options opt;
  opt.json = true;
  json j = json::parse(run_catalog(opt, &code));
  CHECK(code == exit_ok);
  REQUIRE(j.size() == 6);
  CHECK(j[0]["name"] == "heisenberg");
  CHECK(j[0]["class"] == "Sasakian");

  opt.filter = "class=IV";
  json filtered = json::parse(run_catalog(opt, &code));
  REQUIRE(filtered.size() == 1);
  CHECK(filtered[0]["name"] == "class-IV");

  opt.filter = "name~bogus";
  run_catalog(opt, &code);
  CHECK(code == exit_io);
}

TEST_CASE("verify: pass, named violation, missing file") {
  TempDir tmp;
  save_model(milnor_model<S>(S(4), S(1)), tmp.file("class1.json"));
  int code = 0;
  json j = run_json(cmd_verify, tmp.file("class1.json"), {}, &code);
  CHECK(code == exit_ok);
  CHECK(j["report_schema"] == "1");
  CHECK(j["backend"] == "exact");
  for (const auto& c : j["axiom_results"]) CHECK(c["pass"] == true);

  // corrupted: broken antisymmetry -> exit 1 with the violation named
  {
    json m = model_to_json(milnor_model<S>(S(4), S(1)));
    m["brackets"].push_back({{"i", 3}, {"j", 2}, {"coeffs", {"2", "0", "0"}}});
    std::ofstream f(tmp.file("bad.json"));
    f << m.dump();
  }
  json bad = run_json(cmd_verify, tmp.file("bad.json"), {}, &code);
  CHECK(code == exit_fail);
  CHECK(bad["error"]["kind"] == "InvariantViolation");
  CHECK(std::string(bad["error"]["detail"]).find("antisymmetry") != std::string::npos);

  // corrupted phi -> named axiom failure
  {
    json m = model_to_json(milnor_model<S>(S(4), S(1)));
    m["phi"][2][1] = "-1";
    std::ofstream f(tmp.file("badphi.json"));
    f << m.dump();
  }
  json badphi = run_json(cmd_verify, tmp.file("badphi.json"), {}, &code);
  CHECK(code == exit_fail);
  bool found = false;
  for (const auto& c : badphi["axiom_results"])
    if (c["pass"] == false &&
        (c["name"] == "phi_squared" || c["name"] == "d_eta_compatibility"))
      found = true;
  CHECK(found);

  run_json(cmd_verify, tmp.file("missing.json"), {}, &code);
  CHECK(code == exit_io);
}

TEST_CASE("verify --all processes a directory in name order") {
  TempDir tmp;
  Options opt;
  opt.export_dir = tmp.file("models");
  run_catalog(opt);
  Options vopt;
  vopt.all_dir = tmp.file("models");
  vopt.json = true;
  std::ostringstream out;
  int code = cmd_verify("", vopt, out);
  CHECK(code == exit_ok);
  json arr = json::parse(out.str());
  REQUIRE(arr.size() == 6);
  CHECK(arr[0]["model_id"] == "class-I");  // lexicographic input order
  CHECK(arr[5]["model_id"] == "heisenberg");
}

TEST_CASE("verify --all aggregates the worst exit code") {
  TempDir tmp;
  Options opt;
  opt.export_dir = tmp.file("models");
  run_catalog(opt);
  {
    json m = model_to_json(milnor_model<S>(S(4), S(1)));
    m["phi"][2][1] = "-1";
    std::ofstream f(tmp.file("models/zz-broken.json"));
    f << m.dump();
  }
  Options vopt;
  vopt.all_dir = tmp.file("models");
  vopt.json = true;
  std::ostringstream out;
  int code = cmd_verify("", vopt, out);
  CHECK(code == exit_fail);
  json arr = json::parse(out.str());
  REQUIRE(arr.size() == 7);
  CHECK(arr[6]["model_id"] == "zz-broken");
  bool failed_entry = false;
  for (const auto& c : arr[6]["axiom_results"])
    if (c["pass"] == false) failed_entry = true;
  CHECK(failed_entry);
}

TEST_CASE("classify catalog models") {
  TempDir tmp;
  save_model(milnor_model<S>(S(1), S(-4)), tmp.file("class2.json"));
  int code = 0;
  json j = run_json(cmd_classify, tmp.file("class2.json"), {}, &code);
  CHECK(code == exit_ok);
  CHECK(j["kappa_mu"]["boeckx"] == "-3/5");
  CHECK(j["kappa_mu"]["class"] == "II");
  CHECK(j["kappa_mu"]["kappa"] == "-21/4");
  CHECK(j["pang"]["d_plus"]["pang_class"] == "positive_definite");
  CHECK(j["pang"]["d_minus"]["pang_class"] == "negative_definite");

  save_model(milnor_model<S>(S(0), S(0)), tmp.file("heis.json"));
  json h = run_json(cmd_classify, tmp.file("heis.json"), {}, &code);
  CHECK(code == exit_ok);
  CHECK(h["kappa_mu"]["class"] == "Sasakian");
  CHECK(!h["kappa_mu"].contains("boeckx"));
  CHECK(!h["kappa_mu"].contains("mu"));
}

TEST_CASE("classify flags non-nullity models") {
  TempDir tmp;
  save_model(kmu_test::non_nullity_model<S>(), tmp.file("control.json"));
  int code = 0;
  json j = run_json(cmd_classify, tmp.file("control.json"), {}, &code);
  CHECK(code == exit_fail);
  CHECK(j["not_kappa_mu"] == true);
  CHECK(!j.contains("kappa_mu"));
  for (const auto& c : j["axiom_results"]) CHECK(c["pass"] == true);
}

TEST_CASE("synthesize pipeline: sasakianize then classify the written file") {
  TempDir tmp;
  save_model(milnor_model<S>(S(4), S(1)), tmp.file("class1.json"));
  Options opt;
  opt.sasakianize = true;
  opt.output_path = tmp.file("s.json");
  int code = 0;
  opt.json = true;
  std::ostringstream out;
  code = cmd_synthesize(tmp.file("class1.json"), opt, out);
  CHECK(code == exit_ok);
  json j = json::parse(out.str());
  CHECK(j["synthesis"]["sasakian"] == true);
  CHECK(j["synthesis"]["fitted"]["class"] == "Sasakian");

  json cls = run_json(cmd_classify, tmp.file("s.json"), {}, &code);
  CHECK(code == exit_ok);
  CHECK(cls["kappa_mu"]["class"] == "Sasakian");
}

TEST_CASE("synthesize with explicit c and failure modes") {
  TempDir tmp;
  save_model(milnor_model<S>(S(2), S(0)), tmp.file("class4.json"));
  save_model(milnor_model<S>(S(4), S(1)), tmp.file("class1.json"));

  Options opt;
  opt.c_str = "4";
  opt.output_path = tmp.file("f.json");
  opt.json = true;
  std::ostringstream out;
  int code = cmd_synthesize(tmp.file("class4.json"), opt, out);
  CHECK(code == exit_ok);
  json j = json::parse(out.str());
  CHECK(j["synthesis"]["fitted"]["kappa"] == "0");
  CHECK(j["synthesis"]["fitted"]["mu"] == "0");

  // wrong class for mode c
  Options bad;
  bad.c_str = "2";
  bad.json = true;
  std::ostringstream out2;
  code = cmd_synthesize(tmp.file("class1.json"), bad, out2);
  CHECK(code == exit_fail);
  json err = json::parse(out2.str());
  CHECK(err["error"]["kind"] == "PreconditionFailed");
  CHECK(std::string(err["error"]["detail"]).find("|I_M| = 1") != std::string::npos);

  // mode selection is mandatory and exclusive
  Options none;
  none.json = true;
  std::ostringstream out3;
  code = cmd_synthesize(tmp.file("class1.json"), none, out3);
  CHECK(code == exit_io);
}

TEST_CASE("tw-parallel carries its convention warning") {
  TempDir tmp;
  save_model(milnor_model<S>(S(1), S(-4)), tmp.file("class2.json"));
  Options opt;
  opt.tw_parallel = true;
  opt.json = true;
  std::ostringstream out;
  int code = cmd_synthesize(tmp.file("class2.json"), opt, out);
  CHECK(code == exit_ok);
  json j = json::parse(out.str());
  CHECK(j["synthesis"]["fitted"]["kappa"] == "-3");
  CHECK(j["synthesis"]["fitted"]["mu"] == "2");
  CHECK(j["synthesis"]["fitted"]["boeckx"] == "0");
  REQUIRE(j["warnings"].size() >= 1);
  CHECK(std::string(j["warnings"][0]).find("radicand") != std::string::npos);
}

TEST_CASE("roundtrip mode through the CLI") {
  TempDir tmp;
  save_model(milnor_model<S>(S(0), S(-2)), tmp.file("class5.json"));
  Options opt;
  opt.roundtrip = true;
  opt.output_path = tmp.file("r.json");
  opt.json = true;
  std::ostringstream out;
  int code = cmd_synthesize(tmp.file("class5.json"), opt, out);
  CHECK(code == exit_ok);
  json j = json::parse(out.str());
  CHECK(j["synthesis"]["c"] == "-4");
  auto orig = load_model<S>(tmp.file("class5.json"));
  auto rt = load_model<S>(tmp.file("r.json"));
  CHECK(model_equal(orig, rt));
}

TEST_CASE("reports are deterministic and round-trip through their schema") {
  TempDir tmp;
  save_model(milnor_model<S>(S(4), S(1)), tmp.file("class1.json"));
  Options opt;
  opt.json = true;
  std::ostringstream a, b;
  cmd_classify(tmp.file("class1.json"), opt, a);
  cmd_classify(tmp.file("class1.json"), opt, b);
  CHECK(a.str() == b.str());

  json j = json::parse(a.str());
  Report r = report_from_json(j);
  CHECK(report_to_json(r) == j);
  CHECK(report_to_json(report_from_json(report_to_json(r))) == j);

  // a synthesis report (more optional blocks) round-trips too
  Options sopt;
  sopt.json = true;
  sopt.tw_parallel = true;
  save_model(milnor_model<S>(S(1), S(-4)), tmp.file("class2.json"));
  std::ostringstream sc;
  cmd_synthesize(tmp.file("class2.json"), sopt, sc);
  json sj = json::parse(sc.str());
  CHECK(report_to_json(report_from_json(sj)) == sj);
}

TEST_CASE("synthesize falls back to the float backend on a nested radical") {
  TempDir tmp;
  save_model(kmu_test::twisted_model<S>(1, 7, 1), tmp.file("nested.json"));
  Options opt;
  opt.sasakianize = true;
  opt.json = true;
  opt.output_path = tmp.file("ns.json");
  std::ostringstream out;
  int code = cmd_synthesize(tmp.file("nested.json"), opt, out);
  CHECK(code == exit_ok);
  json j = json::parse(out.str());
  CHECK(j["backend"] == "float");
  CHECK(j["tolerance"] == 1e-9);
  CHECK(j["synthesis"]["sasakian"] == true);
  bool warned = false;
  for (const auto& w : j["warnings"])
    if (std::string(w).find("float backend") != std::string::npos) warned = true;
  CHECK(warned);
  // the written model re-verifies on the float backend
  Options vopt;
  vopt.backend = "float";
  int vcode = 0;
  run_json(cmd_verify, tmp.file("ns.json"), vopt, &vcode);
  CHECK(vcode == exit_ok);
}

TEST_CASE("float backend reproduces the exact verdicts on the catalog") {
  TempDir tmp;
  Options exp;
  exp.export_dir = tmp.file("models");
  run_catalog(exp);
  for (const auto& e : catalog<S>()) {
    std::string path = tmp.file("models/" + e.name + ".json");
    int code_e = 0, code_f = 0;
    json je = run_json(cmd_classify, path, {}, &code_e);
    Options fopt;
    fopt.backend = "float";
    fopt.tolerance = 1e-9;
    json jf = run_json(cmd_classify, path, fopt, &code_f);
    CHECK(code_e == code_f);
    CHECK(jf["backend"] == "float");
    CHECK(jf["tolerance"] == 1e-9);
    CHECK(je["kappa_mu"]["class"] == jf["kappa_mu"]["class"]);
    if (je.contains("pang")) {
      CHECK(je["pang"]["d_plus"]["pang_class"] == jf["pang"]["d_plus"]["pang_class"]);
      CHECK(je["pang"]["d_minus"]["pang_class"] == jf["pang"]["d_minus"]["pang_class"]);
    }
    // numeric agreement within the tolerance
    if (je["kappa_mu"].contains("boeckx")) {
      double ev = ExactScalar::parse(je["kappa_mu"]["boeckx"].get<std::string>()).to_double();
      double fv = std::stod(jf["kappa_mu"]["boeckx"].get<std::string>());
      CHECK(std::fabs(ev - fv) <= 1e-9 * std::max(1.0, std::fabs(ev)));
    }
  }
}

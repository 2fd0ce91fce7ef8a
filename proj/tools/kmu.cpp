// kmu: verification and synthesis for contact metric frame models.
//
//   kmu catalog [--json] [--filter class=IV] [--export DIR]
//   kmu verify <model.json> | --all DIR   [--json] [--backend exact|float] [--tolerance T]
//   kmu classify <model.json>             [--json] [--backend exact|float] [--tolerance T]
//   kmu synthesize <model.json> (--a A --b B | --c C | --sasakianize | --tw-parallel | --roundtrip)
//                  [-o OUT] [--json] [--backend exact|float] [--tolerance T]
//
// Exit codes: 0 all checks pass, 1 verification or precondition failure,
// 2 I/O or usage error.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "kmu/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"exact verification and synthesis for contact metric (kappa,mu) frame models"};
  app.require_subcommand(1);

  kmu::cli::Options opt;
  std::string path;
  std::string a_val, b_val, c_val;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_flag("--json", opt.json, "machine-readable JSON output");
    cmd->add_option("--backend", opt.backend, "exact | float")
        ->check(CLI::IsMember({"exact", "float"}));
    cmd->add_option("--tolerance", opt.tolerance, "float backend comparison tolerance");
  };

  CLI::App* cat = app.add_subcommand("catalog", "list the built-in model catalog");
  cat->add_flag("--json", opt.json, "machine-readable JSON output");
  cat->add_option("--filter", opt.filter, "filter, e.g. class=IV");
  cat->add_option("--export", opt.export_dir, "write catalog models into a directory");

  CLI::App* ver = app.add_subcommand("verify", "run the full axiom and identity suite");
  ver->add_option("model", path, "model file");
  ver->add_option("--all", opt.all_dir, "verify every *.json in a directory");
  add_common(ver);

  CLI::App* cls = app.add_subcommand("classify", "extract (kappa,mu) and the class label");
  cls->add_option("model", path, "model file")->required();
  add_common(cls);

  CLI::App* syn = app.add_subcommand("synthesize", "build a compatible structure");
  syn->add_option("model", path, "model file")->required();
  CLI::Option* oa = syn->add_option("--a", a_val, "parameter a");
  CLI::Option* ob = syn->add_option("--b", b_val, "parameter b");
  CLI::Option* oc = syn->add_option("--c", c_val, "parameter c");
  syn->add_flag("--sasakianize", opt.sasakianize, "compatible Sasakian structure (|I_M| > 1)");
  syn->add_flag("--tw-parallel", opt.tw_parallel, "structure fitting (kappa,2) (|I_M| < 1)");
  syn->add_flag("--roundtrip", opt.roundtrip, "parameters reproducing the input exactly");
  syn->add_option("-o,--output", opt.output_path, "write the synthesized model here");
  add_common(syn);

  CLI11_PARSE(app, argc, argv);

  if (cat->parsed()) return kmu::cli::cmd_catalog(opt, std::cout);
  if (ver->parsed()) {
    if (path.empty() && opt.all_dir.empty()) {
      std::cerr << "verify: give a model file or --all DIR\n";
      return kmu::cli::exit_io;
    }
    return kmu::cli::cmd_verify(path, opt, std::cout);
  }
  if (cls->parsed()) return kmu::cli::cmd_classify(path, opt, std::cout);
  if (syn->parsed()) {
    if (*oa) opt.a_str = a_val;
    if (*ob) opt.b_str = b_val;
    if (*oc) opt.c_str = c_val;
    return kmu::cli::cmd_synthesize(path, opt, std::cout);
  }
  return kmu::cli::exit_io;
}

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dmlat/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"dmlat: diamond (M5) sublattice counts in subgroup lattices of finite abelian groups"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  dmlat::CliOptions opt;
  app.add_flag("--json", opt.json, "emit machine-readable JSON (counts as decimal strings)");
  app.add_option("--oracle-cap", opt.limits.order_cap,
                 "max group order the brute-force oracle will materialize")
      ->envname("DMLAT_ORACLE_CAP");

  std::string spec, method = "auto", sort = "lex";
  bool dump = false;
  uint64_t prime = 2;
  uint32_t exponent = 1;

  auto* dm_cmd = app.add_subcommand("dm", "count diamonds in L(G)")->fallthrough();
  dm_cmd->add_option("spec", spec, "group spec, e.g. 'Z2^2xZ3^2' or 'Z12'")->required();
  dm_cmd->add_option("--method", method, "auto|formula|oracle");

  auto* verify_cmd = app.add_subcommand("verify", "run all applicable methods plus the oracle")->fallthrough();
  verify_cmd->add_option("spec", spec)->required();

  auto* sections_cmd = app.add_subcommand("sections", "section census and diamond classes")->fallthrough();
  sections_cmd->add_option("spec", spec)->required();

  auto* aut_cmd = app.add_subcommand("aut", "automorphism group order")->fallthrough();
  aut_cmd->add_option("spec", spec)->required();

  auto* subs_cmd = app.add_subcommand("subgroups", "subgroup count / lattice")->fallthrough();
  subs_cmd->add_option("spec", spec)->required();
  subs_cmd->add_flag("--dump", dump, "dump the lattice, one subgroup per line");

  auto* survey_cmd = app.add_subcommand("survey", "dm across all types of order p^n")->fallthrough();
  survey_cmd->add_option("--prime", prime, "the prime p")->required();
  survey_cmd->add_option("--exponent", exponent, "the exponent n")->required();
  survey_cmd->add_option("--sort", sort, "dm|lex");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return dmlat::kExitUsage;
  }

  if (dm_cmd->parsed()) return dmlat::run_dm(spec, method, opt, std::cout, std::cerr);
  if (verify_cmd->parsed()) return dmlat::run_verify(spec, opt, std::cout, std::cerr);
  if (sections_cmd->parsed()) return dmlat::run_sections(spec, opt, std::cout, std::cerr);
  if (aut_cmd->parsed()) return dmlat::run_aut(spec, opt, std::cout, std::cerr);
  if (subs_cmd->parsed()) return dmlat::run_subgroups(spec, dump, opt, std::cout, std::cerr);
  if (survey_cmd->parsed()) return dmlat::run_survey(prime, exponent, sort, opt, std::cout, std::cerr);
  return dmlat::kExitUsage;
}

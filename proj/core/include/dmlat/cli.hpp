#ifndef DMLAT_CLI_HPP
#define DMLAT_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <string>

#include "dmlat/formulas.hpp"

namespace dmlat {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,        // parse/usage errors
  kExitUnavailable = 2,  // no applicable method / oracle cap exceeded
  kExitMismatch = 3,     // verification mismatch
};

struct CliOptions {
  bool json = false;
  OracleLimits limits;
};

int run_dm(const std::string& spec, const std::string& method, const CliOptions& opt,
           std::ostream& out, std::ostream& err);
int run_verify(const std::string& spec, const CliOptions& opt, std::ostream& out,
               std::ostream& err);
int run_sections(const std::string& spec, const CliOptions& opt, std::ostream& out,
                 std::ostream& err);
int run_aut(const std::string& spec, const CliOptions& opt, std::ostream& out, std::ostream& err);
int run_subgroups(const std::string& spec, bool dump, const CliOptions& opt, std::ostream& out,
                  std::ostream& err);
int run_survey(uint64_t prime, uint32_t exponent, const std::string& sort, const CliOptions& opt,
               std::ostream& out, std::ostream& err);

}  // namespace dmlat

#endif

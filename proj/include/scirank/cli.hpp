#ifndef SCIRANK_CLI_HPP
#define SCIRANK_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace scirank::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kParse = 2,
    kUnknownTaxon = 3,
    kInfeasible = 4,
    kZeroMarginal = 5,
};

/// Runs one subcommand (validate, rank, stratify, ca, corr). `args` excludes
/// the program name. Reports go to `out` (or --output), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scirank::cli

#endif  // SCIRANK_CLI_HPP

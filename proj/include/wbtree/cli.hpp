#ifndef WBTREE_CLI_HPP
#define WBTREE_CLI_HPP

#include <iosfwd>

namespace wbtree::cli {

enum ExitCode : int { kOk = 0, kFindings = 1, kInputError = 2 };

/// Entry point for the `wbtree` tool. Exit status: 0 success, 1 validation
/// findings or score/structure differences, 2 input or format errors (with
/// nothing written).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wbtree::cli

#endif  // WBTREE_CLI_HPP

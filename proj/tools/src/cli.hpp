#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ase::cli {

/// Exit codes: 0 success, 1 domain error (code on `err`), 2 usage error.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err,
            char** environ = nullptr);

}  // namespace ase::cli

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace phdnet::cli {

/// Runs one subcommand (`ingest`, `analyze`, `regress`, `validate`, `synth`,
/// `export`). `args` includes the program name. Returns the process exit
/// code: 0 success, 1 usage/config, 2 data, 3 numeric failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace phdnet::cli

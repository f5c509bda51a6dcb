#pragma once

namespace hmf {

// Dispatch for the hmf command-line tool.  Exit codes: 0 success, 1 domain
// error, 2 configuration / usage error.
int run_cli(int argc, char** argv);

}  // namespace hmf

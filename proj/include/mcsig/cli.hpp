#ifndef MCSIG_CLI_HPP
#define MCSIG_CLI_HPP

namespace mcsig {

// Batch front end. Exit codes: 0 success, 1 validation, 2 I/O, 3 computation.
int run_cli(int argc, const char* const* argv);

}  // namespace mcsig

#endif

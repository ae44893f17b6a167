#pragma once

#include <ostream>

namespace numphase::cli {

enum ExitCode : int {
  kOk = 0,
  kAssertFailed = 1,  // --assert found an unexpected verdict
  kBadInput = 2,      // malformed spec or flags
  kTruncation = 3,
};

/// Whether ANSI color may be used on each stream.
struct Terminal {
  bool out_color = false;
  bool err_color = false;
};

/// Runs the numphase command line in-process. argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
        Terminal terminal = {});

/// Color is on only when NO_COLOR is unset or empty and the stream is a terminal.
bool color_enabled(int fd);

}  // namespace numphase::cli

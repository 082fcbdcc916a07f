#pragma once

#include <iosfwd>
#include <string>

namespace ssfd {

// Exit status: 0 success, 1 parameter or usage error, 2 numerical failure.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Default location of the presets file (JSON).
std::string default_presets_path();

}  // namespace ssfd

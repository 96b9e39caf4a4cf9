#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dkap::cli {

enum ExitCode : int {
    kOk = 0,
    kDomainError = 1,
    kResourceError = 2,
    kVerificationFailure = 3,
};

// Environment variable naming the default directory for report files.
inline constexpr const char* kOutputDirEnv = "DKAP_OUTPUT_DIR";

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dkap::cli

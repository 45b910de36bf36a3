#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ssfm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPropertyFails = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 64-bit FNV-1a of the bytes, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace ssfm::cli

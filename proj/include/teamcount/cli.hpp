#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace teamcount {

/// Runs one `teamcount` command line. Reports go to `out` as `key = value`
/// lines; diagnostics go to `err`. Returns 0 on success, 1 when a --verify
/// cross-check disagrees, 2 on usage errors and 3 on runtime errors.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// 64-bit FNV-1a, used for input digests in reports.
std::uint64_t fnv1a(std::string_view data);

}  // namespace teamcount

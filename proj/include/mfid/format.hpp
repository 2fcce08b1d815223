#pragma once

#include <string>

namespace mfid {

/// Shortest decimal string that round-trips to the same double. Locale
/// independent; non-finite values render as `nan`, `inf`, `-inf`.
std::string shortest(double value);

}  // namespace mfid

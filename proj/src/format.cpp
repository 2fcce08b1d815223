#include "mfid/format.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace mfid {

std::string shortest(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) return "0";  // folds -0
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return {buf.data(), end};
}

}  // namespace mfid

#include <cctype>
#include <charconv>
#include <cmath>

#include "mfid/error.hpp"
#include "mfid/format.hpp"
#include "mfid/harness.hpp"

namespace mfid::harness {
namespace {

// Recursive-descent scanner for `ident '=' number ':' number ':' integer`.
class SweepScanner {
public:
    explicit SweepScanner(std::string_view text) : text_(text) {}

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    std::string identifier() {
        skip_space();
        const std::size_t start = pos_;
        if (pos_ >= text_.size() || !(std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            throw ParseError(pos_, "expected a parameter name");
        }
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    void expect(char c) {
        skip_space();
        if (pos_ >= text_.size() || text_[pos_] != c) {
            throw ParseError(pos_, std::string("expected '") + c + "'");
        }
        ++pos_;
    }

    double number() {
        skip_space();
        const char* first = text_.data() + pos_;
        const char* last = text_.data() + text_.size();
        if (pos_ < text_.size() && text_[pos_] == '+') ++first;  // from_chars rejects '+'
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || !std::isfinite(value)) throw ParseError(pos_, "expected a number");
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        return value;
    }

    int integer() {
        skip_space();
        const char* first = text_.data() + pos_;
        int value = 0;
        const auto [ptr, ec] = std::from_chars(first, text_.data() + text_.size(), value);
        if (ec != std::errc()) throw ParseError(pos_, "expected an integer sample count");
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        return value;
    }

    void end() {
        skip_space();
        if (pos_ != text_.size()) throw ParseError(pos_, "unexpected trailing input");
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

SweepSpec parse_sweep(std::string_view text) {
    SweepScanner scan(text);
    SweepSpec spec;
    spec.parameter = scan.identifier();
    scan.expect('=');
    spec.lo = scan.number();
    scan.expect(':');
    spec.hi = scan.number();
    scan.expect(':');
    spec.n = scan.integer();
    scan.end();

    if (!(spec.lo < spec.hi)) {
        throw Error(ErrorCode::BoundsError,
                    "sweep lower bound " + shortest(spec.lo) + " must be below " + shortest(spec.hi));
    }
    if (spec.n < 2) throw Error(ErrorCode::BoundsError, "sweep needs at least 2 samples");
    return spec;
}

std::vector<double> SweepSpec::values() const {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

}  // namespace mfid::harness

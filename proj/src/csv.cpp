#include "mfgeq/csv.hpp"

#include <cstdio>

namespace mfgeq::csv {

std::string format(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void row(std::ostream& os, std::initializer_list<std::string_view> cells) {
    bool first = true;
    for (auto c : cells) {
        if (!first) os << ',';
        os << c;
        first = false;
    }
    os << '\n';
}

}  // namespace mfgeq::csv

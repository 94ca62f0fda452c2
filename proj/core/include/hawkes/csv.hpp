#pragma once

#include <cstdio>
#include <string>

namespace hawkes {

/// Round-trip-exact float formatting (17 significant digits) so repeated runs
/// produce byte-identical CSV files.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace hawkes

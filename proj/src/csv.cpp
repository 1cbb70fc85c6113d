#include "csv.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "fraclps/errors.hpp"

namespace fraclps::detail {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& tok, std::size_t line_no) {
    std::size_t start = tok.find_first_not_of(" \t");
    std::size_t stop = tok.find_last_not_of(" \t");
    if (start == std::string::npos) {
        throw InputError("line " + std::to_string(line_no) + ": empty value");
    }
    const std::string s = tok.substr(start, stop - start + 1);
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw InputError("line " + std::to_string(line_no) + ": cannot parse '" + s + "'");
    }
}

}  // namespace fraclps::detail

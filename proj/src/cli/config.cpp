#include "fraclps/cli/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "fraclps/errors.hpp"

namespace fraclps::cli {
namespace {

[[noreturn]] void bad(const std::string& key, const std::string& range, const std::string& value) {
    throw ConfigError(key + " must be " + range + " (got '" + value + "')");
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::optional<double> to_double(const std::string& v) {
    if (v == "inf" || v == "+inf") return std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size() || std::isnan(d)) return std::nullopt;
        return d;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::optional<long long> to_int(const std::string& v) {
    try {
        std::size_t used = 0;
        const long long i = std::stoll(v, &used);
        if (used != v.size()) return std::nullopt;
        return i;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

double real_in(const std::string& key, const std::string& v, const std::string& range,
               const std::function<bool(double)>& ok) {
    const auto d = to_double(v);
    if (!d || !ok(*d)) bad(key, range, v);
    return *d;
}

int int_in(const std::string& key, const std::string& v, const std::string& range, long long lo, long long hi) {
    const auto i = to_int(v);
    if (!i || *i < lo || *i > hi) bad(key, range, v);
    return static_cast<int>(*i);
}

int pow2_in(const std::string& key, const std::string& v, long long lo, long long hi) {
    const std::string range = "a power of two in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
    const auto i = to_int(v);
    if (!i || *i < lo || *i > hi || (*i & (*i - 1)) != 0) bad(key, range, v);
    return static_cast<int>(*i);
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <typename T>
std::string join(const std::vector<T>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ',';
        if constexpr (std::is_same_v<T, double>) {
            s += fmt(xs[i]);
        } else {
            s += std::to_string(xs[i]);
        }
    }
    return s;
}

struct Key {
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

auto positive = [](double d) { return d > 0.0 && std::isfinite(d); };
auto nonneg = [](double d) { return d >= 0.0 && std::isfinite(d); };
auto open_exponent = [](double d) { return d > 1.0 && std::isfinite(d); };

const std::vector<std::pair<std::string, Key>>& keys() {
    static const std::vector<std::pair<std::string, Key>> table = {
        {"dim", {[](RunConfig& c, const std::string& v) { c.dim = int_in("dim", v, "1 or 2", 1, 2); },
                 [](const RunConfig& c) { return std::to_string(c.dim); }}},
        {"n", {[](RunConfig& c, const std::string& v) { c.n = pow2_in("n", v, 8, 1 << 20); },
               [](const RunConfig& c) { return std::to_string(c.n); }}},
        {"L", {[](RunConfig& c, const std::string& v) { c.period = real_in("L", v, "in (0, inf)", positive); },
               [](const RunConfig& c) { return fmt(c.period); }}},
        {"m", {[](RunConfig& c, const std::string& v) { c.m = int_in("m", v, "an integer in [1, 4096]", 1, 4096); },
               [](const RunConfig& c) { return std::to_string(c.m); }}},
        {"r", {[](RunConfig& c, const std::string& v) {
                   c.r = real_in("r", v, "in [1, inf]", [](double d) { return d >= 1.0; });
               },
               [](const RunConfig& c) { return fmt(c.r); }}},
        {"alpha", {[](RunConfig& c, const std::string& v) {
                       std::vector<double> a;
                       for (const auto& item : split_list(v)) {
                           a.push_back(real_in("alpha", item, "a comma-separated list of reals in (0, inf)", positive));
                       }
                       if (a.empty()) bad("alpha", "a nonempty list", v);
                       c.alpha = a;
                   },
                   [](const RunConfig& c) { return join(c.alpha); }}},
        {"p", {[](RunConfig& c, const std::string& v) {
                   c.p = real_in("p", v, "in [1, inf]", [](double d) { return d >= 1.0; });
               },
               [](const RunConfig& c) { return fmt(c.p); }}},
        {"q", {[](RunConfig& c, const std::string& v) { c.q = real_in("q", v, "in (1, inf)", open_exponent); },
               [](const RunConfig& c) { return fmt(c.q); }}},
        {"lambda", {[](RunConfig& c, const std::string& v) {
                        c.lambda = real_in("lambda", v, "in (1, inf)", open_exponent);
                    },
                    [](const RunConfig& c) { return fmt(c.lambda); }}},
        {"t", {[](RunConfig& c, const std::string& v) { c.t = real_in("t", v, "in (0, inf)", positive); },
               [](const RunConfig& c) { return fmt(c.t); }}},
        {"t_min", {[](RunConfig& c, const std::string& v) {
                       c.t_min = real_in("t_min", v, "in (0, inf), or 0 for automatic", nonneg);
                   },
                   [](const RunConfig& c) { return fmt(c.t_min); }}},
        {"t_max", {[](RunConfig& c, const std::string& v) {
                       c.t_max = real_in("t_max", v, "in (0, inf), or 0 for automatic", nonneg);
                   },
                   [](const RunConfig& c) { return fmt(c.t_max); }}},
        {"count", {[](RunConfig& c, const std::string& v) {
                       c.count = int_in("count", v, "an integer in [2, 100000], or 0 for automatic", 0, 100000);
                       if (c.count == 1) bad("count", "an integer in [2, 100000], or 0 for automatic", v);
                   },
                   [](const RunConfig& c) { return std::to_string(c.count); }}},
        {"route", {[](RunConfig& c, const std::string& v) {
                       if (v != "spectral" && v != "quadrature" && v != "subordination") {
                           bad("route", "one of spectral, quadrature, subordination", v);
                       }
                       c.route = v;
                   },
                   [](const RunConfig& c) { return c.route; }}},
        {"near_nodes", {[](RunConfig& c, const std::string& v) {
                            c.near_nodes = int_in("near_nodes", v, "an integer in [4, 4096]", 4, 4096);
                        },
                        [](const RunConfig& c) { return std::to_string(c.near_nodes); }}},
        {"far_nodes", {[](RunConfig& c, const std::string& v) {
                           c.far_nodes = int_in("far_nodes", v, "an integer in [4, 4096]", 4, 4096);
                       },
                       [](const RunConfig& c) { return std::to_string(c.far_nodes); }}},
        {"subordination_nodes", {[](RunConfig& c, const std::string& v) {
                                     c.subordination_nodes =
                                         int_in("subordination_nodes", v, "an integer in [8, 65536]", 8, 65536);
                                 },
                                 [](const RunConfig& c) { return std::to_string(c.subordination_nodes); }}},
        {"tolerance", {[](RunConfig& c, const std::string& v) {
                           c.tolerance = real_in("tolerance", v, "in (0, inf)", positive);
                       },
                       [](const RunConfig& c) { return c.tolerance ? fmt(*c.tolerance) : std::string("default"); }}},
        {"seed", {[](RunConfig& c, const std::string& v) {
                      const auto i = to_int(v);
                      if (!i || *i < 0) bad("seed", "a nonnegative integer", v);
                      c.seed = static_cast<std::uint64_t>(*i);
                      c.probe.seed = c.seed;
                  },
                  [](const RunConfig& c) { return std::to_string(c.seed); }}},
        {"out", {[](RunConfig& c, const std::string& v) {
                     if (v.empty()) bad("out", "a nonempty directory path", v);
                     c.out = v;
                 },
                 // The output location does not change any number.
                 [](const RunConfig&) { return std::string("-"); }}},
        {"probe.r", {[](RunConfig& c, const std::string& v) {
                         c.probe.r = real_in("probe.r", v, "in [1, inf]", [](double d) { return d >= 1.0; });
                     },
                     [](const RunConfig& c) { return fmt(c.probe.r); }}},
        {"probe.q", {[](RunConfig& c, const std::string& v) {
                         c.probe.q = real_in("probe.q", v, "in (1, inf)", open_exponent);
                     },
                     [](const RunConfig& c) { return fmt(c.probe.q); }}},
        {"probe.p", {[](RunConfig& c, const std::string& v) {
                         c.probe.p = real_in("probe.p", v, "in (1, inf), or 0 for p = q",
                                             [](double d) { return d == 0.0 || open_exponent(d); });
                     },
                     [](const RunConfig& c) { return fmt(c.probe.p); }}},
        {"probe.alpha", {[](RunConfig& c, const std::string& v) {
                             c.probe.alpha = real_in("probe.alpha", v, "in (0, inf)", positive);
                         },
                         [](const RunConfig& c) { return fmt(c.probe.alpha); }}},
        {"probe.m_list", {[](RunConfig& c, const std::string& v) {
                              std::vector<int> ms;
                              for (const auto& item : split_list(v)) {
                                  ms.push_back(int_in("probe.m_list", item,
                                                      "a strictly increasing list of integers in [1, 4096]", 1, 4096));
                              }
                              for (std::size_t i = 1; i < ms.size(); ++i) {
                                  if (ms[i] <= ms[i - 1]) bad("probe.m_list", "strictly increasing", v);
                              }
                              if (ms.empty()) bad("probe.m_list", "a nonempty list", v);
                              c.probe.m_list = ms;
                          },
                          [](const RunConfig& c) { return join(c.probe.m_list); }}},
        {"probe.trials", {[](RunConfig& c, const std::string& v) {
                              c.probe.trials = int_in("probe.trials", v, "an integer in [1, 100000]", 1, 100000);
                          },
                          [](const RunConfig& c) { return std::to_string(c.probe.trials); }}},
        {"probe.n", {[](RunConfig& c, const std::string& v) { c.probe.n = pow2_in("probe.n", v, 8, 1 << 20); },
                     [](const RunConfig& c) { return std::to_string(c.probe.n); }}},
        {"probe.base_freq", {[](RunConfig& c, const std::string& v) {
                                 c.probe.base_freq = int_in("probe.base_freq", v, "an integer >= 1", 1, 1 << 20);
                             },
                             [](const RunConfig& c) { return std::to_string(c.probe.base_freq); }}},
        {"probe.bounded_threshold", {[](RunConfig& c, const std::string& v) {
                                         c.probe.bounded_threshold =
                                             real_in("probe.bounded_threshold", v, "in (0, inf)", positive);
                                     },
                                     [](const RunConfig& c) { return fmt(c.probe.bounded_threshold); }}},
        {"probe.growth_threshold", {[](RunConfig& c, const std::string& v) {
                                        c.probe.growth_threshold =
                                            real_in("probe.growth_threshold", v, "in (0, inf)", positive);
                                    },
                                    [](const RunConfig& c) { return fmt(c.probe.growth_threshold); }}},
        {"hilbert.half_width", {[](RunConfig& c, const std::string& v) {
                                    c.hilbert.half_width = real_in("hilbert.half_width", v, "in (0, inf)", positive);
                                },
                                [](const RunConfig& c) { return fmt(c.hilbert.half_width); }}},
        {"hilbert.intervals", {[](RunConfig& c, const std::string& v) {
                                   c.hilbert.intervals = pow2_in("hilbert.intervals", v, 64, 1 << 22);
                               },
                               [](const RunConfig& c) { return std::to_string(c.hilbert.intervals); }}},
        {"hilbert.levels", {[](RunConfig& c, const std::string& v) {
                                c.hilbert.levels = int_in("hilbert.levels", v, "an integer in [1, 8]", 1, 8);
                            },
                            [](const RunConfig& c) { return std::to_string(c.hilbert.levels); }}},
        {"hilbert.multiples", {[](RunConfig& c, const std::string& v) {
                                   std::vector<int> ks;
                                   for (const auto& item : split_list(v)) {
                                       ks.push_back(int_in("hilbert.multiples", item,
                                                           "a list of distinct integers in [2, 4096]", 2, 4096));
                                   }
                                   if (ks.size() < 2) bad("hilbert.multiples", "a list of two or more integers", v);
                                   c.hilbert.multiples = ks;
                               },
                               [](const RunConfig& c) { return join(c.hilbert.multiples); }}},
        {"hilbert.threshold", {[](RunConfig& c, const std::string& v) {
                                   c.hilbert.threshold = real_in("hilbert.threshold", v, "in (0, inf)", positive);
                               },
                               [](const RunConfig& c) { return fmt(c.hilbert.threshold); }}},
    };
    return table;
}

const Key* find_key(const std::string& name) {
    for (const auto& [k, v] : keys()) {
        if (k == name) return &v;
    }
    return nullptr;
}

}  // namespace

std::string RunConfig::canonical() const {
    std::string s;
    for (const auto& [k, v] : keys()) s += k + "=" + v.get(*this) + "\n";
    return s;
}

void set_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    const Key* k = find_key(key);
    if (!k) throw ConfigError("unknown key '" + key + "'");
    k->set(cfg, value);
}

void validate(const RunConfig& cfg) {
    if (cfg.explicit_time_grid() || cfg.t_min > 0.0 || cfg.t_max > 0.0) {
        if (!(cfg.t_min > 0.0) || !(cfg.t_max > cfg.t_min) || cfg.count < 2) {
            throw ConfigError("t_min, t_max and count must be set together with 0 < t_min < t_max and count >= 2");
        }
    }
    if (cfg.dim == 2 && cfg.n > 4096) throw ConfigError("n must be at most 4096 when dim = 2");
    if (cfg.hilbert.intervals % (1 << cfg.hilbert.levels) != 0) {
        throw ConfigError("hilbert.levels must leave an even interval count at the coarsest level");
    }
    cfg.probe.validate();
}

RunConfig parse_config(std::istream& is) {
    RunConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    std::map<std::string, std::size_t> seen;
    while (std::getline(is, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (auto it = seen.find(key); it != seen.end()) {
            throw ConfigError("line " + std::to_string(line_no) + ": key '" + key + "' repeats line " +
                              std::to_string(it->second));
        }
        seen[key] = line_no;
        set_key(cfg, key, value);
    }
    validate(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(is);
}

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace fraclps::cli

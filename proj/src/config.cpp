#include "hsde/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace hsde {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& key, const std::string& msg) { throw ConfigError(key + ": " + msg); }

double to_double(const std::string& key, const std::string& v) {
    double x = 0.0;
    const auto* end = v.data() + v.size();
    const auto [p, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc() || p != end || !std::isfinite(x)) fail(key, "expected a number, got '" + v + "'");
    return x;
}

long to_long(const std::string& key, const std::string& v) {
    long x = 0;
    const auto* end = v.data() + v.size();
    const auto [p, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc() || p != end) fail(key, "expected an integer, got '" + v + "'");
    return x;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    fail(key, "expected true or false, got '" + v + "'");
}

std::vector<std::string> split(const std::string& v, char sep) {
    std::vector<std::string> out;
    if (trim(v).empty()) return out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    for (const auto& x : split(v, ',')) out.push_back(to_double(key, x));
    return out;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
    return s;
}

struct Key {
    const char* name;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

#define HSDE_DOUBLE(k, field)                                                             \
    Key {                                                                                 \
        k, [](RunConfig& c, const std::string& v) { c.field = to_double(k, v); },         \
            [](const RunConfig& c) { return fmt(c.field); }                               \
    }
#define HSDE_BOOL(k, field)                                                               \
    Key {                                                                                 \
        k, [](RunConfig& c, const std::string& v) { c.field = to_bool(k, v); },           \
            [](const RunConfig& c) { return std::string(c.field ? "true" : "false"); }    \
    }
#define HSDE_STRING(k, field)                                                             \
    Key {                                                                                 \
        k, [](RunConfig& c, const std::string& v) { c.field = v; },                       \
            [](const RunConfig& c) { return c.field; }                                    \
    }

const std::vector<Key>& keys() {
    static const std::vector<Key> table = {
        {"L",
         [](RunConfig& c, const std::string& v) {
             c.L.clear();
             for (const auto& x : split(v, 'x')) {
                 const long n = to_long("L", x);
                 if (n < 1) fail("L", "extents must be positive");
                 c.L.push_back(static_cast<int>(n));
             }
             if (c.L.empty()) fail("L", "empty extent");
         },
         [](const RunConfig& c) {
             std::string s;
             for (std::size_t i = 0; i < c.L.size(); ++i) s += (i ? "x" : "") + std::to_string(c.L[i]);
             return s;
         }},
        {"d", [](RunConfig& c, const std::string& v) { c.d = static_cast<int>(to_long("d", v)); },
         [](const RunConfig& c) { return std::to_string(c.d); }},
        {"boundary",
         [](RunConfig& c, const std::string& v) {
             try {
                 c.boundary = parse_boundary(v);
             } catch (const ConfigError& e) {
                 fail("boundary", e.what());
             }
         },
         [](const RunConfig& c) { return to_string(c.boundary); }},
        HSDE_DOUBLE("t", t),
        HSDE_DOUBLE("mu", mu),
        HSDE_DOUBLE("r", r),
        HSDE_DOUBLE("s", s),
        HSDE_DOUBLE("u", u),
        HSDE_DOUBLE("w1", w[0]),
        HSDE_DOUBLE("w2", w[1]),
        HSDE_DOUBLE("w3", w[2]),
        {"e1", [](RunConfig& c, const std::string& v) { c.e[0] = static_cast<int>(to_long("e1", v)); },
         [](const RunConfig& c) { return std::to_string(c.e[0]); }},
        {"e2", [](RunConfig& c, const std::string& v) { c.e[1] = static_cast<int>(to_long("e2", v)); },
         [](const RunConfig& c) { return std::to_string(c.e[1]); }},
        {"e3", [](RunConfig& c, const std::string& v) { c.e[2] = static_cast<int>(to_long("e3", v)); },
         [](const RunConfig& c) { return std::to_string(c.e[2]); }},
        HSDE_DOUBLE("dt", dt),
        HSDE_DOUBLE("beta", beta),
        {"paths", [](RunConfig& c, const std::string& v) { c.paths = to_long("paths", v); },
         [](const RunConfig& c) { return std::to_string(c.paths); }},
        {"seed",
         [](RunConfig& c, const std::string& v) {
             const long x = to_long("seed", v);
             if (x < 0) fail("seed", "must be non-negative");
             c.seed = static_cast<std::uint64_t>(x);
         },
         [](const RunConfig& c) { return std::to_string(c.seed); }},
        {"representation",
         [](RunConfig& c, const std::string& v) {
             try {
                 c.representation = parse_representation(v);
             } catch (const ConfigError& e) {
                 fail("representation", e.what());
             }
         },
         [](const RunConfig& c) { return to_string(c.representation); }},
        {"checkpoints", [](RunConfig& c, const std::string& v) { c.checkpoints = to_list("checkpoints", v); },
         [](const RunConfig& c) { return fmt_list(c.checkpoints); }},
        HSDE_BOOL("extrapolate", extrapolate),
        {"corr_ref", [](RunConfig& c, const std::string& v) { c.corr_ref = static_cast<int>(to_long("corr_ref", v)); },
         [](const RunConfig& c) { return std::to_string(c.corr_ref); }},
        {"corr_site",
         [](RunConfig& c, const std::string& v) { c.corr_site = static_cast<int>(to_long("corr_site", v)); },
         [](const RunConfig& c) { return std::to_string(c.corr_site); }},
        HSDE_DOUBLE("max_fail_fraction", max_fail_fraction),
        HSDE_BOOL("exact_exponential", exact_exponential),
        HSDE_STRING("toy_mode", toy_mode),
        HSDE_DOUBLE("toy_mu", toy_mu),
        {"toy_lambdas", [](RunConfig& c, const std::string& v) { c.toy_lambdas = to_list("toy_lambdas", v); },
         [](const RunConfig& c) { return fmt_list(c.toy_lambdas); }},
        {"toy_steps", [](RunConfig& c, const std::string& v) { c.toy_steps = to_long("toy_steps", v); },
         [](const RunConfig& c) { return std::to_string(c.toy_steps); }},
        HSDE_STRING("ansatz", ansatz),
        HSDE_DOUBLE("T", T),
        HSDE_DOUBLE("zt_dt", zt_dt),
        HSDE_DOUBLE("amp_min", amp_min),
        HSDE_DOUBLE("amp_max", amp_max),
        HSDE_DOUBLE("amp_step", amp_step),
        HSDE_STRING("path", output_path),
        HSDE_STRING("format", format),
    };
    return table;
}

#undef HSDE_DOUBLE
#undef HSDE_BOOL
#undef HSDE_STRING

bool given(const RunConfig& c, const char* k) { return c.explicit_keys.count(k) > 0; }

}  // namespace

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
    for (const auto& k : keys()) {
        if (key == k.name) {
            k.set(cfg, trim(value));
            cfg.explicit_keys.insert(key);
            return;
        }
    }
    fail(key, "unknown key");
}

void finalize_config(RunConfig& c) {
    if (c.L.empty()) fail("L", "empty extent");
    if (c.L.size() > 1) {
        if (given(c, "d") && c.d != static_cast<int>(c.L.size())) fail("d", "does not match the extents of L");
        c.d = static_cast<int>(c.L.size());
    }
    if (c.d < 1) fail("d", "must be positive");

    if (!given(c, "w1") && !given(c, "w2") && !given(c, "w3")) {
        c.w = {0.0, 0.0, 0.0};
        c.w[c.representation == Representation::w2 ? 1 : 0] = 1.0;
    }
    const char* wk[3] = {"w1", "w2", "w3"};
    const char* ek[3] = {"e1", "e2", "e3"};
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) {
        if (c.w[i] < 0.0) fail(wk[i], "weights must be non-negative");
        sum += c.w[i];
        if (!given(c, ek[i])) c.e[i] = c.u < 0.0 ? -1 : 1;
        if (c.e[i] != 1 && c.e[i] != -1) fail(ek[i], "signs must be +1 or -1");
    }
    if (std::abs(sum - 1.0) > 1e-12) fail("w1", "weights w1 + w2 + w3 must sum to 1");
    const int eu = c.u < 0.0 ? -1 : 1;
    if (c.representation == Representation::w1 && (c.w[0] != 1.0 || c.e[0] != eu))
        fail("representation", "w1 requires w1 = 1 and e1 = sign(u)");
    if (c.representation == Representation::w2 && (c.w[1] != 1.0 || c.e[1] != eu))
        fail("representation", "w2 requires w2 = 1 and e2 = sign(u)");

    if (!(c.dt > 0.0)) fail("dt", "must be positive");
    if (!(c.beta >= 0.0)) fail("beta", "must be non-negative");
    if (c.paths < 1) fail("paths", "must be positive");
    for (double b : c.checkpoints)
        if (b < 0.0 || b > c.beta) fail("checkpoints", "must lie in [0, beta]");
    if (c.corr_ref < 0) fail("corr_ref", "must be a site index");
    if (c.max_fail_fraction < 0.0) fail("max_fail_fraction", "must be non-negative");
    if (c.toy_mode != "raw" && c.toy_mode != "girsanov") fail("toy_mode", "expected raw or girsanov");
    if (c.toy_steps < 1) fail("toy_steps", "must be positive");
    if (c.ansatz != "staggered" && c.ansatz != "uniform") fail("ansatz", "expected staggered or uniform");
    if (!(c.T >= 0.0)) fail("T", "must be non-negative");
    if (!(c.zt_dt > 0.0)) fail("zt_dt", "must be positive");
    if (!(c.amp_step > 0.0)) fail("amp_step", "must be positive");
    if (c.amp_max < c.amp_min) fail("amp_max", "must be at least amp_min");
    if (c.format != "csv" && c.format != "json") fail("format", "expected csv or json");
    const int n = c.lattice().n_sites();
    if (c.corr_ref >= n) fail("corr_ref", "site index out of range");
    if (c.corr_site >= n) fail("corr_site", "site index out of range");
}

RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        apply_setting(c, trim(line.substr(0, eq)), line.substr(eq + 1));
    }
    finalize_config(c);
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
    std::string out;
    for (const auto& k : keys()) out += std::string(k.name) + " = " + k.get(c) + "\n";
    return out;
}

bool RunConfig::operator==(const RunConfig& o) const { return serialize_config(*this) == serialize_config(o); }

LatticeSpec RunConfig::lattice() const {
    if (L.size() == 1) return build_lattice(L[0], d, boundary);
    return build_lattice(L, boundary);
}

ModelParams RunConfig::model() const { return make_model(lattice(), t, mu, r, s, u); }

HsScheme RunConfig::scheme() const {
    HsScheme sc;
    sc.w = w;
    sc.e = e;
    return sc;
}

SimConfig RunConfig::sim() const {
    SimConfig c;
    c.lattice = lattice();
    c.params = model();
    c.scheme = scheme();
    c.rep = representation;
    c.dt = dt;
    c.beta = beta;
    c.paths = paths;
    c.seed = seed;
    c.checkpoints = checkpoints;
    c.corr_ref = corr_ref;
    c.max_fail_fraction = max_fail_fraction;
    c.extrapolate = extrapolate;
    return c;
}

PfConfig RunConfig::pf() const {
    PfConfig c;
    c.params = model();
    c.scheme = scheme();
    c.dt = dt;
    c.beta = beta;
    c.paths = paths;
    c.seed = seed;
    c.exact_exponential = exact_exponential;
    c.extrapolate = extrapolate;
    return c;
}

ToySpec RunConfig::toy(double b) const {
    ToySpec t;
    t.lambdas = toy_lambdas;
    t.mu = toy_mu;
    t.beta = b;
    t.dt = b > 0.0 ? b / static_cast<double>(toy_steps) : dt;
    t.paths = paths;
    t.seed = seed;
    t.mode = parse_toy_mode(toy_mode);
    return t;
}

ZeroTempConfig RunConfig::zerotemp() const {
    ZeroTempConfig z;
    z.lattice = lattice();
    z.params = model();
    z.rep = representation;
    z.kind = parse_ansatz(ansatz);
    z.T = T;
    z.dt = zt_dt;
    return z;
}

}  // namespace hsde

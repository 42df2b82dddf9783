#include "cure/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace cure {

std::string to_string(TransmissionMode m) {
    return m == TransmissionMode::Coherent ? "coherent" : "non-coherent";
}

std::string to_string(HarvesterModel m) {
    return m == HarvesterModel::Linear ? "linear" : "non-linear";
}

std::string to_string(DeploymentStrategy s) {
    switch (s) {
        case DeploymentStrategy::Edge: return "edge";
        case DeploymentStrategy::Central: return "central";
        case DeploymentStrategy::Hybrid: return "hybrid";
    }
    return "hybrid";
}

TransmissionMode parse_mode(const std::string& s) {
    if (s == "coherent") return TransmissionMode::Coherent;
    if (s == "non-coherent" || s == "noncoherent") return TransmissionMode::NonCoherent;
    throw ValidationError("unknown mode '" + s + "'");
}

HarvesterModel parse_eh_model(const std::string& s) {
    if (s == "linear") return HarvesterModel::Linear;
    if (s == "non-linear" || s == "nonlinear") return HarvesterModel::NonLinear;
    throw ValidationError("unknown eh_model '" + s + "'");
}

DeploymentStrategy parse_strategy(const std::string& s) {
    if (s == "edge") return DeploymentStrategy::Edge;
    if (s == "central") return DeploymentStrategy::Central;
    if (s == "hybrid") return DeploymentStrategy::Hybrid;
    throw ValidationError("unknown strategy '" + s + "'");
}

ScenarioSpec default_scenario() {
    ScenarioSpec spec;
    derive_system(spec);
    return spec;
}

void derive_system(ScenarioSpec& spec) {
    SystemParams& sys = spec.system;
    sys.delta_u = sys.delta_c - sys.delta_p - sys.delta_d;
    sys.sigma2 = noise_power_from_dbm(spec.noise_dbm);
    sys.f_c = spec.carrier_ghz * 1e9;
    if (spec.ap_count > 0) sys.rho_d = spec.total_power_w / spec.ap_count;
}

namespace {

int integer_sqrt(int n) {
    int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    return r * r == n ? r : -1;
}

void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

}  // namespace

void validate(const ScenarioSpec& spec) {
    const SystemParams& sys = spec.system;
    require(sys.delta_c >= 1 && sys.delta_p >= 1 && sys.delta_d >= 1,
            "sample counts must be >= 1");
    require(sys.delta_u >= 1, "delta_p + delta_d must leave at least one uplink sample");
    require(sys.delta_p + sys.delta_d + sys.delta_u == sys.delta_c,
            "delta_p + delta_d + delta_u != delta_c");
    require(std::isfinite(sys.rho_p) && sys.rho_p > 0, "pilot power must be > 0");
    require(std::isfinite(sys.rho_d) && sys.rho_d > 0, "downlink power must be > 0");
    require(std::isfinite(sys.sigma2) && sys.sigma2 > 0, "noise power must be > 0");
    require(std::isfinite(sys.f_c) && sys.f_c > 0, "carrier frequency must be > 0");
    require(sys.sigma_sf_los >= 0 && sys.sigma_sf_nlos >= 0, "shadowing std must be >= 0");

    const RectifierParams& r = spec.rectifier;
    require(r.a > 0, "rect_a must be > 0");
    require(r.b >= 0, "rect_b must be >= 0");
    require(r.c > 0, "rect_c must be > 0");

    require(spec.ap_count >= 1, "ap_count must be >= 1");
    const int side = integer_sqrt(spec.ap_count);
    require(side > 0, "ap_count must be a perfect square");
    require(spec.antennas >= 1, "antennas must be >= 1");
    require(spec.user_count >= 1, "user_count must be >= 1");
    require(spec.ris_count >= 0, "ris_count must be >= 0");
    require(spec.ris_elements >= 0, "ris_elements must be >= 0");
    require(spec.ris_alpha > 0 && spec.ris_alpha <= 1, "alpha out of (0,1]");
    require(spec.coverage_m > 0, "coverage_m must be > 0");
    require(spec.ap_height_m >= 0 && spec.ris_height_m >= 0 && spec.user_height_m >= 0,
            "heights must be >= 0");
    require(spec.setups >= 1, "setups must be >= 1");
    require(spec.mc_realizations >= 100, "mc_realizations must be >= 100");

    const int slots = (side - 1) * (side - 1);
    int central = 0;
    if (spec.strategy == DeploymentStrategy::Central) central = spec.ris_count;
    if (spec.strategy == DeploymentStrategy::Hybrid) central = spec.ris_count / 2;
    require(central <= slots, "ris_count needs " + std::to_string(central) +
                                  " central slots but the AP grid has " +
                                  std::to_string(slots));
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double to_double(const std::string& v, int line) {
    double out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ParseError(line, "expected a number, got '" + v + "'");
    return out;
}

long long to_integer(const std::string& v, int line) {
    long long out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ParseError(line, "expected an integer, got '" + v + "'");
    return out;
}

int to_int(const std::string& v, int line) {
    const long long x = to_integer(v, line);
    if (x < -2147483647LL || x > 2147483647LL) throw ParseError(line, "integer out of range");
    return static_cast<int>(x);
}

using Setter = std::function<void(ScenarioSpec&, const std::string&, int)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"delta_c", [](ScenarioSpec& s, const std::string& v, int l) { s.system.delta_c = to_int(v, l); }},
        {"delta_p", [](ScenarioSpec& s, const std::string& v, int l) { s.system.delta_p = to_int(v, l); }},
        {"delta_d", [](ScenarioSpec& s, const std::string& v, int l) { s.system.delta_d = to_int(v, l); }},
        {"rho_p_w", [](ScenarioSpec& s, const std::string& v, int l) { s.system.rho_p = to_double(v, l); }},
        {"total_power_w", [](ScenarioSpec& s, const std::string& v, int l) { s.total_power_w = to_double(v, l); }},
        {"noise_dbm", [](ScenarioSpec& s, const std::string& v, int l) { s.noise_dbm = to_double(v, l); }},
        {"carrier_ghz", [](ScenarioSpec& s, const std::string& v, int l) { s.carrier_ghz = to_double(v, l); }},
        {"shadow_los_db", [](ScenarioSpec& s, const std::string& v, int l) { s.system.sigma_sf_los = to_double(v, l); }},
        {"shadow_nlos_db", [](ScenarioSpec& s, const std::string& v, int l) { s.system.sigma_sf_nlos = to_double(v, l); }},
        {"ap_count", [](ScenarioSpec& s, const std::string& v, int l) { s.ap_count = to_int(v, l); }},
        {"antennas", [](ScenarioSpec& s, const std::string& v, int l) { s.antennas = to_int(v, l); }},
        {"user_count", [](ScenarioSpec& s, const std::string& v, int l) { s.user_count = to_int(v, l); }},
        {"ris_count", [](ScenarioSpec& s, const std::string& v, int l) { s.ris_count = to_int(v, l); }},
        {"ris_elements", [](ScenarioSpec& s, const std::string& v, int l) { s.ris_elements = to_int(v, l); }},
        {"ris_alpha", [](ScenarioSpec& s, const std::string& v, int l) { s.ris_alpha = to_double(v, l); }},
        {"coverage_m", [](ScenarioSpec& s, const std::string& v, int l) { s.coverage_m = to_double(v, l); }},
        {"ap_height_m", [](ScenarioSpec& s, const std::string& v, int l) { s.ap_height_m = to_double(v, l); }},
        {"ris_height_m", [](ScenarioSpec& s, const std::string& v, int l) { s.ris_height_m = to_double(v, l); }},
        {"user_height_m", [](ScenarioSpec& s, const std::string& v, int l) { s.user_height_m = to_double(v, l); }},
        {"mode", [](ScenarioSpec& s, const std::string& v, int l) {
             try { s.mode = parse_mode(v); } catch (const ValidationError& e) { throw ParseError(l, e.what()); }
         }},
        {"eh_model", [](ScenarioSpec& s, const std::string& v, int l) {
             try { s.eh_model = parse_eh_model(v); } catch (const ValidationError& e) { throw ParseError(l, e.what()); }
         }},
        {"strategy", [](ScenarioSpec& s, const std::string& v, int l) {
             try { s.strategy = parse_strategy(v); } catch (const ValidationError& e) { throw ParseError(l, e.what()); }
         }},
        {"setups", [](ScenarioSpec& s, const std::string& v, int l) { s.setups = to_int(v, l); }},
        {"seed", [](ScenarioSpec& s, const std::string& v, int l) { s.seed = to_integer(v, l); }},
        {"mc_realizations", [](ScenarioSpec& s, const std::string& v, int l) { s.mc_realizations = to_int(v, l); }},
        {"rect_a", [](ScenarioSpec& s, const std::string& v, int l) { s.rectifier.a = to_double(v, l); }},
        {"rect_b", [](ScenarioSpec& s, const std::string& v, int l) { s.rectifier.b = to_double(v, l); }},
        {"rect_c", [](ScenarioSpec& s, const std::string& v, int l) { s.rectifier.c = to_double(v, l); }},
    };
    return table;
}

}  // namespace

ScenarioSpec parse_scenario(const std::string& text) {
    ScenarioSpec spec;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "delta_u")
            throw ParseError(line_no, "delta_u is derived from delta_c - delta_p - delta_d");
        const auto it = setters().find(key);
        if (it == setters().end()) throw ParseError(line_no, "unknown key '" + key + "'");
        if (value.empty()) throw ParseError(line_no, "missing value for '" + key + "'");
        it->second(spec, value, line_no);
    }
    derive_system(spec);
    validate(spec);
    return spec;
}

ScenarioSpec load_scenario(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open scenario file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_scenario(ss.str());
}

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string serialize_scenario(const ScenarioSpec& s) {
    std::ostringstream out;
    auto kv = [&](const char* k, const std::string& v) { out << k << " = " << v << '\n'; };
    kv("delta_c", std::to_string(s.system.delta_c));
    kv("delta_p", std::to_string(s.system.delta_p));
    kv("delta_d", std::to_string(s.system.delta_d));
    kv("rho_p_w", fmt_double(s.system.rho_p));
    kv("total_power_w", fmt_double(s.total_power_w));
    kv("noise_dbm", fmt_double(s.noise_dbm));
    kv("carrier_ghz", fmt_double(s.carrier_ghz));
    kv("shadow_los_db", fmt_double(s.system.sigma_sf_los));
    kv("shadow_nlos_db", fmt_double(s.system.sigma_sf_nlos));
    kv("ap_count", std::to_string(s.ap_count));
    kv("antennas", std::to_string(s.antennas));
    kv("user_count", std::to_string(s.user_count));
    kv("ris_count", std::to_string(s.ris_count));
    kv("ris_elements", std::to_string(s.ris_elements));
    kv("ris_alpha", fmt_double(s.ris_alpha));
    kv("coverage_m", fmt_double(s.coverage_m));
    kv("ap_height_m", fmt_double(s.ap_height_m));
    kv("ris_height_m", fmt_double(s.ris_height_m));
    kv("user_height_m", fmt_double(s.user_height_m));
    kv("mode", to_string(s.mode));
    kv("eh_model", to_string(s.eh_model));
    kv("strategy", to_string(s.strategy));
    kv("setups", std::to_string(s.setups));
    kv("seed", std::to_string(s.seed));
    kv("mc_realizations", std::to_string(s.mc_realizations));
    kv("rect_a", fmt_double(s.rectifier.a));
    kv("rect_b", fmt_double(s.rectifier.b));
    kv("rect_c", fmt_double(s.rectifier.c));
    return out.str();
}

}  // namespace cure

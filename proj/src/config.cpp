#include "billab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "billab/io.hpp"

namespace billab {

namespace {

[[noreturn]] void config_fail(const std::string& origin, int line, const std::string& msg) {
    fail(Status::config_error, origin + ":" + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Parser {
    RunConfig& cfg;
    std::string origin;
    int line = 0;

    double num(const std::string& v) {
        size_t pos = 0;
        double d = 0;
        try {
            d = std::stod(v, &pos);
        } catch (...) {
            config_fail(origin, line, "expected a number, got '" + v + "'");
        }
        if (pos != v.size()) config_fail(origin, line, "trailing characters in number '" + v + "'");
        return d;
    }
    double pos_num(const std::string& v) {
        const double d = num(v);
        if (!(d > 0.0)) config_fail(origin, line, "value must be positive");
        return d;
    }
    int int_num(const std::string& v) {
        const double d = num(v);
        if (d != std::floor(d)) config_fail(origin, line, "expected an integer");
        return static_cast<int>(d);
    }
    bool boolean(const std::string& v) {
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        config_fail(origin, line, "expected a boolean, got '" + v + "'");
    }
    std::vector<int> int_list(const std::string& v) {
        std::vector<int> out;
        std::stringstream ss(v);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            tok = trim(tok);
            if (tok.empty()) config_fail(origin, line, "empty entry in integer list");
            out.push_back(int_num(tok));
        }
        if (out.empty()) config_fail(origin, line, "empty integer list");
        return out;
    }

    void apply(const std::string& key, const std::string& value) {
        using Handler = std::function<void(const std::string&)>;
        const std::map<std::string, Handler> handlers = {
            {"profile.kind",
             [&](const std::string& v) {
                 if (v != "stadium" && v != "power" && v != "gevrey" && v != "flat")
                     config_fail(origin, line, "profile.kind must be stadium|power|gevrey|flat");
                 cfg.profile_kind = v;
             }},
            {"profile.a", [&](const std::string& v) { cfg.a = num(v); }},
            {"profile.half_width", [&](const std::string& v) { cfg.half_width = pos_num(v); }},
            {"profile.k", [&](const std::string& v) { cfg.k = int_num(v); }},
            {"profile.alpha", [&](const std::string& v) { cfg.alpha = num(v); }},
            {"profile.coeff", [&](const std::string& v) { cfg.coeff = num(v); }},
            {"profile.tau", [&](const std::string& v) { cfg.tau = pos_num(v); }},
            {"profile.sign",
             [&](const std::string& v) {
                 if (v != "open" && v != "close")
                     config_fail(origin, line, "profile.sign must be open|close");
                 cfg.sign = v;
             }},
            {"profile.wing_span", [&](const std::string& v) { cfg.wing_span = pos_num(v); }},
            {"grid.h", [&](const std::string& v) { cfg.h = pos_num(v); }},
            {"grid.max_lambda_h", [&](const std::string& v) { cfg.max_lambda_h = pos_num(v); }},
            {"solver.lambda_min",
             [&](const std::string& v) {
                 cfg.lambda_min = num(v);
                 if (cfg.lambda_min < 0) config_fail(origin, line, "lambda_min must be >= 0");
             }},
            {"solver.lambda_max", [&](const std::string& v) { cfg.lambda_max = pos_num(v); }},
            {"solver.max_modes", [&](const std::string& v) { cfg.max_modes = int_num(v); }},
            {"solver.tol_eig", [&](const std::string& v) { cfg.tol_eig = pos_num(v); }},
            {"solver.split_parity", [&](const std::string& v) { cfg.split_parity = boolean(v); }},
            {"solver.seed",
             [&](const std::string& v) { cfg.seed = static_cast<uint64_t>(pos_num(v) + 0.5); }},
            {"separable.n_list", [&](const std::string& v) { cfg.separable_n_list = int_list(v); }},
            {"separable.count", [&](const std::string& v) { cfg.separable_count = int_num(v); }},
            {"separable.h_factor",
             [&](const std::string& v) { cfg.separable_h_factor = pos_num(v); }},
            {"separable.wall_sensitivity",
             [&](const std::string& v) { cfg.wall_sensitivity = boolean(v); }},
            {"quasimode.n_list", [&](const std::string& v) { cfg.quasimode_n_list = int_list(v); }},
            {"quasimode.p",
             [&](const std::string& v) {
                 cfg.quasimode_p = num(v);
                 if (cfg.quasimode_p < 0) config_fail(origin, line, "quasimode.p must be >= 0");
             }},
            {"quasimode.c", [&](const std::string& v) { cfg.quasimode_c = pos_num(v); }},
            {"quasimode.fixed_inner", [&](const std::string& v) { cfg.fixed_inner = pos_num(v); }},
            {"quasimode.fixed_outer", [&](const std::string& v) { cfg.fixed_outer = pos_num(v); }},
            {"analysis.delta", [&](const std::string& v) { cfg.delta = pos_num(v); }},
            {"analysis.eps0", [&](const std::string& v) { cfg.eps0 = pos_num(v); }},
            {"analysis.cutoff_p", [&](const std::string& v) { cfg.cutoff_p = pos_num(v); }},
            {"analysis.cutoff_c", [&](const std::string& v) { cfg.cutoff_c = pos_num(v); }},
            {"analysis.gamma", [&](const std::string& v) { cfg.gamma = pos_num(v); }},
            {"analysis.s", [&](const std::string& v) { cfg.s_exp = pos_num(v); }},
            {"analysis.lemma_norms", [&](const std::string& v) { cfg.lemma_norms = boolean(v); }},
            {"analysis.margin", [&](const std::string& v) { cfg.margin = pos_num(v); }},
            {"output.fields", [&](const std::string& v) { cfg.write_fields = boolean(v); }},
            {"output.dir", [&](const std::string& v) { cfg.out_dir = v; }},
        };
        auto it = handlers.find(key);
        if (it == handlers.end()) config_fail(origin, line, "unknown key '" + key + "'");
        it->second(value);
    }
};

} // namespace

DomainProfile RunConfig::make_profile() const {
    const double w = half_width > 0.0 ? half_width : std::numbers::pi;
    double c = coeff;
    if (!sign.empty()) c = (sign == "open" ? 1.0 : -1.0) * std::abs(coeff);
    const double span = wing_span > 0.0 ? wing_span : 1.0;
    if (profile_kind == "stadium") return make_stadium(a, w);
    if (profile_kind == "power") return make_power(a, w, k, alpha, c, span);
    if (profile_kind == "gevrey") return make_gevrey(a, w, tau, c, span);
    if (profile_kind == "flat") return make_flat(a, w, a + (wing_span > 0.0 ? wing_span : 0.0));
    fail(Status::config_error, "profile.kind is required (stadium|power|gevrey|flat)");
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    cfg.raw_text = text;
    cfg.config_sha256 = sha256_hex(text.data(), text.size());
    Parser parser{cfg, origin, 0};
    std::stringstream ss(text);
    std::string raw;
    while (std::getline(ss, raw)) {
        ++parser.line;
        const auto hash = raw.find('#');
        std::string stripped = hash == std::string::npos ? raw : raw.substr(0, hash);
        stripped = trim(stripped);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            config_fail(origin, parser.line, "expected 'key = value'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty() || value.empty())
            config_fail(origin, parser.line, "expected 'key = value'");
        parser.apply(key, value);
    }
    if (cfg.profile_kind.empty())
        fail(Status::config_error, origin + ": missing required key profile.kind");
    if (cfg.fixed_inner >= cfg.fixed_outer)
        fail(Status::config_error, origin + ": quasimode.fixed_inner must be < fixed_outer");
    cfg.make_profile(); // validate profile parameters eagerly
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Status::io_error, "cannot open config " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

} // namespace billab

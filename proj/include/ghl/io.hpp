#pragma once

// Run configuration (layered defaults + key=value file + CLI overrides),
// deterministic CSV emission, and the JSON summary with provenance.

#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "common.hpp"

namespace ghl {

using json = nlohmann::ordered_json;

struct RunConfig {
    std::vector<real> endpoints{-3, -2, -1, 1, 2, 3};
    int nq = 320;            // surface quadrature order per segment
    int nystrom_n = 128;     // Nystrom nodes per exterior cut
    real theta_eps = real(1e-20);
    real kappa_max = 42;
    real scan_step = real(5e-3);
    real eps_div = real(1e-6);
    int nmax = 15;
    std::uint64_t seed = 20260815ull;
    int ndraws = 100;
    int points = 10;
    int phantom_degree = 0;
    real omega_margin = real(0.05);
    int s1 = 1, s2 = 1;
    real instab_j_lo = real(-1.6), instab_j_hi = real(1.6);
    real stab_j_lo = real(-1.5), stab_j_hi = real(1.5);
    real bump_width = real(0.1);
    real bump_step = real(0.05);
    real d_gamma = real(0.1);
    std::string out_dir = ".";
    bool verbose = false;

    std::string canonical() const {
        std::ostringstream os;
        os.precision(21);
        os << "endpoints=";
        for (size_t i = 0; i < endpoints.size(); ++i) os << (i ? "," : "") << (double)endpoints[i];
        os << ";nq=" << nq << ";nystrom_n=" << nystrom_n << ";theta_eps=" << (double)theta_eps
           << ";kappa_max=" << (double)kappa_max << ";scan_step=" << (double)scan_step
           << ";eps_div=" << (double)eps_div << ";nmax=" << nmax << ";seed=" << seed
           << ";ndraws=" << ndraws << ";points=" << points << ";phantom_degree=" << phantom_degree
           << ";omega_margin=" << (double)omega_margin << ";s1=" << s1 << ";s2=" << s2
           << ";instab_j=" << (double)instab_j_lo << "," << (double)instab_j_hi
           << ";stab_j=" << (double)stab_j_lo << "," << (double)stab_j_hi
           << ";bump_width=" << (double)bump_width << ";bump_step=" << (double)bump_step
           << ";d_gamma=" << (double)d_gamma;
        return os.str();
    }
};

inline real parse_real(const std::string& s, const std::string& key, int line_no) {
    try {
        size_t pos = 0;
        const real v = std::stold(s, &pos);
        while (pos < s.size() && std::isspace((unsigned char)s[pos])) ++pos;
        if (pos != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw config_error("line " + std::to_string(line_no) + ": key '" + key +
                           "' has a non-numeric value '" + s + "'");
    }
}

inline void apply_config_line(RunConfig& cfg, const std::string& key, const std::string& val,
                              int line_no) {
    auto as_int = [&](const std::string& s) { return int(std::llround((double)parse_real(s, key, line_no))); };
    if (key == "endpoints") {
        std::vector<real> pts;
        std::stringstream ss(val);
        std::string tok;
        while (std::getline(ss, tok, ',')) pts.push_back(parse_real(tok, key, line_no));
        cfg.endpoints = pts;
    } else if (key == "nq") cfg.nq = as_int(val);
    else if (key == "nystrom_n") cfg.nystrom_n = as_int(val);
    else if (key == "theta_eps") cfg.theta_eps = parse_real(val, key, line_no);
    else if (key == "kappa_max") cfg.kappa_max = parse_real(val, key, line_no);
    else if (key == "scan_step") cfg.scan_step = parse_real(val, key, line_no);
    else if (key == "eps_div") cfg.eps_div = parse_real(val, key, line_no);
    else if (key == "nmax") cfg.nmax = as_int(val);
    else if (key == "seed") cfg.seed = std::uint64_t(std::llround((double)parse_real(val, key, line_no)));
    else if (key == "ndraws") cfg.ndraws = as_int(val);
    else if (key == "points") cfg.points = as_int(val);
    else if (key == "phantom_degree") cfg.phantom_degree = as_int(val);
    else if (key == "omega_margin") cfg.omega_margin = parse_real(val, key, line_no);
    else if (key == "s1") cfg.s1 = as_int(val);
    else if (key == "s2") cfg.s2 = as_int(val);
    else if (key == "instab_j_lo") cfg.instab_j_lo = parse_real(val, key, line_no);
    else if (key == "instab_j_hi") cfg.instab_j_hi = parse_real(val, key, line_no);
    else if (key == "stab_j_lo") cfg.stab_j_lo = parse_real(val, key, line_no);
    else if (key == "stab_j_hi") cfg.stab_j_hi = parse_real(val, key, line_no);
    else if (key == "bump_width") cfg.bump_width = parse_real(val, key, line_no);
    else if (key == "bump_step") cfg.bump_step = parse_real(val, key, line_no);
    else if (key == "d_gamma") cfg.d_gamma = parse_real(val, key, line_no);
    else if (key == "out_dir") cfg.out_dir = val;
    else throw config_error("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
}

inline RunConfig load_config(const std::string& path) {
    RunConfig cfg;
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto l = line.find_first_not_of(" \t\r");
        if (l == std::string::npos) continue;
        auto r = line.find_last_not_of(" \t\r");
        line = line.substr(l, r - l + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("line " + std::to_string(line_no) + ": expected key=value, got '" + line + "'");
        std::string key = line.substr(0, eq), val = line.substr(eq + 1);
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t");
            if (a == std::string::npos) return std::string();
            const auto b = s.find_last_not_of(" \t");
            return s.substr(a, b - a + 1);
        };
        apply_config_line(cfg, trim(key), trim(val), line_no);
    }
    return cfg;
}

inline std::string fnv1a_hash(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)h);
    return buf;
}

inline constexpr const char* GHL_VERSION = "0.1.0";

// fixed-format numeric cell so identical runs emit identical bytes
inline std::string csv_num(real v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12Lg", v);
    return buf;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::initializer_list<real> vals) {
        std::vector<std::string> r;
        for (real v : vals) r.push_back(csv_num(v));
        rows.push_back(std::move(r));
    }
    void add_row_mixed(std::vector<std::string> r) { rows.push_back(std::move(r)); }

    void write(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw config_error("cannot write '" + path + "'");
        for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
        out << "\n";
        for (const auto& r : rows) {
            for (size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
            out << "\n";
        }
    }
};

inline void write_json(const json& j, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot write '" + path + "'");
    out << j.dump(2) << "\n";
}

inline double jnum(real v) { return (double)v; }

}  // namespace ghl

#include "headwave/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "headwave/errors.hpp"
#include "headwave/transform.hpp"

namespace headwave {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string unquote(std::string v) {
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"')
        return v.substr(1, v.size() - 2);
    return v;
}

} // namespace

bool RunConfig::has(const std::string& sec, const std::string& key) const {
    const auto s = sections.find(sec);
    return s != sections.end() && s->second.count(key) > 0;
}

const std::string& RunConfig::get(const std::string& sec, const std::string& key) const {
    const auto s = sections.find(sec);
    if (s == sections.end()) throw ConfigError(sec, "missing section");
    const auto k = s->second.find(key);
    if (k == s->second.end()) throw ConfigError(sec + "." + key, "missing key");
    return k->second;
}

std::string RunConfig::get_or(const std::string& sec, const std::string& key,
                              const std::string& fallback) const {
    return has(sec, key) ? get(sec, key) : fallback;
}

double RunConfig::get_num(const std::string& sec, const std::string& key) const {
    const std::string& v = get(sec, key);
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError(sec + "." + key, "not a number: " + v);
    return x;
}

double RunConfig::get_num_or(const std::string& sec, const std::string& key,
                             double fallback) const {
    return has(sec, key) ? get_num(sec, key) : fallback;
}

int RunConfig::get_int(const std::string& sec, const std::string& key) const {
    const double x = get_num(sec, key);
    const int i = static_cast<int>(x);
    if (static_cast<double>(i) != x)
        throw ConfigError(sec + "." + key, "not an integer");
    return i;
}

std::vector<double> RunConfig::get_nums(const std::string& sec, const std::string& key,
                                        std::size_t expect) const {
    std::istringstream is(get(sec, key));
    std::vector<double> out;
    double x;
    while (is >> x) out.push_back(x);
    if (out.size() != expect)
        throw ConfigError(sec + "." + key,
                          "expected " + std::to_string(expect) + " numbers");
    return out;
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("line " + std::to_string(lineno),
                                  "malformed section header");
            section = trim(t.substr(1, t.size() - 2));
            cfg.sections[section];
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno), "expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string val = unquote(trim(t.substr(eq + 1)));
        if (key.empty())
            throw ConfigError("line " + std::to_string(lineno), "empty key");
        if (section.empty())
            throw ConfigError("line " + std::to_string(lineno), "key outside a section");
        cfg.sections[section][key] = val;
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError(path, "cannot open config file");
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_config(buf.str());
}

std::uint64_t scene_fingerprint(const RunConfig& cfg) {
    const auto it = cfg.sections.find("scene");
    if (it == cfg.sections.end()) throw ConfigError("scene", "missing section");
    std::uint64_t h = 14695981039346656037ull;
    auto feed = [&h](const std::string& s) {
        for (char c : s) {
            if (std::isspace(static_cast<unsigned char>(c))) continue;
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ull;
        }
    };
    for (const auto& [k, v] : it->second) {  // std::map: keys already sorted
        feed(k);
        feed("=");
        feed(v);
        feed(";");
    }
    return h;
}

QuadOptions quad_options(const RunConfig& cfg) {
    QuadOptions opt;
    opt.abs_tol = cfg.get_num_or("quad", "abs_tol", opt.abs_tol);
    opt.rel_tol = cfg.get_num_or("quad", "rel_tol", opt.rel_tol);
    if (cfg.has("quad", "max_intervals"))
        opt.max_intervals = cfg.get_int("quad", "max_intervals");
    return opt;
}

std::string scene_kind(const RunConfig& cfg) { return cfg.get("scene", "kind"); }

namespace {

Expr parse_expr_key(const RunConfig& cfg, const std::string& sec,
                    const std::string& key, std::vector<std::string> vars) {
    try {
        return Expr::parse(cfg.get(sec, key), std::move(vars));
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(sec + "." + key, e.what());
    }
}

Profile build_profile(const RunConfig& cfg, const std::string& var) {
    Profile p;
    p.expr = parse_expr_key(cfg, "scene", "profile", {var});
    const auto sup = cfg.get_nums("scene", "support", 2);
    p.support_lo = sup[0];
    p.support_hi = sup[1];
    if (cfg.has("scene", "total_integral"))
        p.total_integral = cfg.get_num("scene", "total_integral");
    return p;
}

} // namespace

FlatScene2D build_flat_scene(const RunConfig& cfg) {
    FlatScene2D s;
    s.u1 = parse_expr_key(cfg, "scene", "u1", {"x"});
    s.v1 = parse_expr_key(cfg, "scene", "v1", {"x"});
    const std::string mode = cfg.get_or("scene", "mode", "profile");
    if (mode == "profile") {
        s.profile_mode = true;
        s.profile = build_profile(cfg, "x");
        const auto rec = cfg.get_nums("scene", "recon", 2);
        s.recon_lo = rec[0];
        s.recon_hi = rec[1];
    } else if (mode == "field") {
        s.profile_mode = false;
        s.field2d = parse_expr_key(cfg, "scene", "field", {"x", "y"});
        const auto box = cfg.get_nums("scene", "box", 4);
        s.field_box = {box[0], box[1], box[2], box[3]};
    } else {
        throw ConfigError("scene.mode", "must be profile or field");
    }
    return s;
}

HyperplaneScene build_hyperplane_scene(const RunConfig& cfg) {
    HyperplaneScene s;
    s.n = static_cast<int>(cfg.get_num_or("scene", "n", 3));
    s.lambda_u = parse_expr_key(cfg, "scene", "lambda_u", {"x1", "x2"});
    s.lambda_v = parse_expr_key(cfg, "scene", "lambda_v", {"x1", "x2"});
    const auto th = cfg.get_nums("scene", "theta0", 2);
    s.theta0 = {th[0], th[1]};
    s.profile_nd = parse_expr_key(cfg, "scene", "profile", {"x1", "x2"});
    const auto box = cfg.get_nums("scene", "box", 4);
    s.support_box = {box[0], box[1], box[2], box[3]};
    const auto rec = cfg.get_nums("scene", "recon_box", 4);
    s.recon_box = {rec[0], rec[1], rec[2], rec[3]};
    return s;
}

CurveScene build_curve_scene(const RunConfig& cfg) {
    CurveScene s;
    s.gamma_x = parse_expr_key(cfg, "scene", "gamma_x", {"t"});
    s.gamma_y = parse_expr_key(cfg, "scene", "gamma_y", {"t"});
    const auto tr = cfg.get_nums("scene", "t_range", 2);
    s.t_min = tr[0];
    s.t_max = tr[1];
    s.angle_u = parse_expr_key(cfg, "scene", "angle_u", {"t"});
    s.angle_v = parse_expr_key(cfg, "scene", "angle_v", {"t"});
    s.profile = build_profile(cfg, "x");
    s.tube_radius = cfg.get_num("scene", "tube_radius");
    const auto rec = cfg.get_nums("scene", "recon", 2);
    s.recon_lo = rec[0];
    s.recon_hi = rec[1];
    return s;
}

GridSpec build_grid(const RunConfig& cfg, bool require_d_zero) {
    const auto xs = cfg.get_nums("grid", "x", 3);
    const auto ds = cfg.get_nums("grid", "d", 3);
    const int nx = static_cast<int>(xs[2]), nd = static_cast<int>(ds[2]);
    if (nx < 1 || nd < 1) throw ConfigError("grid", "grid counts must be >= 1");
    if (require_d_zero && std::abs(ds[0]) > 1e-12)
        throw ConfigError("grid.d", "d range must start at 0 for this task");
    GridSpec g;
    g.axis1 = linspace(xs[0], xs[1], nx);
    g.axis2 = linspace(ds[0], ds[1], nd);
    return g;
}

} // namespace headwave

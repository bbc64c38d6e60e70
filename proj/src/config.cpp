#include "fmcm/config.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>

#include "fmcm/errors.hpp"
#include "fmcm/supersolution.hpp"

namespace fmcm {

RunConfig::RunConfig() : params(make_params(0.7853981633974483, 1.0, 3)) {}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_tokens(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream iss(s);
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

double to_double(const std::string& tok, const std::string& where) {
    if (tok == "inf" || tok == "+inf") return HUGE_VAL;
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size() || tok.empty()) {
        throw ConfigError(where + ": not a number: '" + tok + "'");
    }
    return v;
}

long to_long(const std::string& tok, const std::string& where) {
    char* end = nullptr;
    const long v = std::strtol(tok.c_str(), &end, 10);
    if (end != tok.c_str() + tok.size() || tok.empty()) {
        throw ConfigError(where + ": not an integer: '" + tok + "'");
    }
    return v;
}

struct RawEntry {
    std::string section;
    std::string key;
    std::vector<std::string> value;
    int line;
};

std::vector<RawEntry> parse_raw(std::istream& is) {
    static const std::vector<std::string> kSections = {
        "params", "measure", "planes", "profile", "arc",
        "eval",   "solve",   "verify", "figures"};
    std::vector<RawEntry> out;
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("line " + std::to_string(lineno) +
                                  ": malformed section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            bool known = false;
            for (const auto& s : kSections) known = known || s == section;
            if (!known) {
                throw ConfigError("line " + std::to_string(lineno) +
                                  ": unknown section [" + section + "]");
            }
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) +
                              ": expected key = value");
        }
        if (section.empty()) {
            throw ConfigError("line " + std::to_string(lineno) +
                              ": key outside any section");
        }
        out.push_back({section, trim(line.substr(0, eq)),
                       split_tokens(line.substr(eq + 1)), lineno});
    }
    return out;
}

[[noreturn]] void unknown_key(const RawEntry& e) {
    throw ConfigError("line " + std::to_string(e.line) + ": unknown key '" +
                      e.key + "' in section [" + e.section + "]");
}

void need(const RawEntry& e, std::size_t n) {
    if (e.value.size() != n) {
        throw ConfigError("line " + std::to_string(e.line) + ": key '" + e.key +
                          "' expects " + std::to_string(n) + " value(s)");
    }
}

std::string where(const RawEntry& e) {
    return "line " + std::to_string(e.line) + " (" + e.section + "." + e.key + ")";
}

}  // namespace

RunConfig parse_config(std::istream& is) {
    const std::vector<RawEntry> raw = parse_raw(is);
    RunConfig cfg;

    double alpha = cfg.params.alpha, c0 = cfg.params.c0;
    int dim = cfg.params.dim;
    for (const auto& e : raw) {
        if (e.section != "params") continue;
        if (e.key == "alpha") {
            need(e, 1);
            alpha = to_double(e.value[0], where(e));
        } else if (e.key == "c0") {
            need(e, 1);
            c0 = to_double(e.value[0], where(e));
        } else if (e.key == "dim") {
            need(e, 1);
            dim = static_cast<int>(to_long(e.value[0], where(e)));
        } else {
            unknown_key(e);
        }
    }
    try {
        cfg.params = make_params(alpha, c0, dim);
    } catch (const Error& err) {
        throw ConfigError(std::string("[params]: ") + err.what());
    }
    cfg.verify.params = cfg.params;

    cfg.measure.dim = cfg.params.dim;
    for (const auto& e : raw) {
        if (e.section == "params") continue;
        const std::string w = where(e);
        if (e.section == "measure") {
            if (cfg.params.dim != 3) {
                throw ConfigError(w + ": angle-based measures require dim = 3");
            }
            cfg.has_measure = true;
            if (e.key == "atom") {
                need(e, 2);
                cfg.measure.add_atom_at_angle(to_double(e.value[0], w),
                                              to_double(e.value[1], w));
            } else if (e.key == "arc") {
                need(e, 2);
                cfg.measure.arcs.push_back(
                    {to_double(e.value[0], w), to_double(e.value[1], w)});
            } else {
                unknown_key(e);
            }
        } else if (e.section == "planes") {
            if (cfg.params.dim != 3) {
                throw ConfigError(w + ": angle-based planes require dim = 3");
            }
            cfg.has_planes = true;
            if (e.key == "plane") {
                need(e, 2);
                const double angle = to_double(e.value[0], w);
                const double gamma = to_double(e.value[1], w);
                const double lambda =
                    std::isinf(gamma)
                        ? 0.0
                        : std::exp(-0.5 * gamma * cfg.params.c0 *
                                   std::sin(cfg.params.alpha));
                cfg.planes.push_back({angle, gamma, lambda});
            } else if (e.key == "weight") {
                need(e, 2);
                const double angle = to_double(e.value[0], w);
                const double lambda = to_double(e.value[1], w);
                if (!(lambda > 0.0)) {
                    throw ConfigError(w + ": weight must be positive");
                }
                cfg.planes.push_back(
                    {angle, weight_intercept(cfg.params, lambda), lambda});
            } else {
                unknown_key(e);
            }
        } else if (e.section == "profile") {
            cfg.has_profile = true;
            if (e.key == "theta") {
                need(e, 1);
                cfg.profile_thetas.push_back(to_double(e.value[0], w));
            } else if (e.key == "sigma") {
                for (const auto& tok : e.value) {
                    const long s = to_long(tok, w);
                    if (s != 0 && s != 1) throw ConfigError(w + ": sigma entries must be 0 or 1");
                    cfg.profile_sigmas.push_back(static_cast<int>(s));
                }
            } else if (e.key == "lambda0") {
                need(e, 1);
                cfg.lambda0 = to_double(e.value[0], w);
            } else {
                unknown_key(e);
            }
        } else if (e.section == "arc") {
            cfg.arc.present = true;
            if (e.key == "theta1") {
                need(e, 1);
                cfg.arc.theta1 = to_double(e.value[0], w);
            } else if (e.key == "theta2") {
                need(e, 1);
                cfg.arc.theta2 = to_double(e.value[0], w);
            } else if (e.key == "lambda") {
                need(e, 1);
                cfg.arc.lambda = to_double(e.value[0], w);
            } else {
                unknown_key(e);
            }
        } else if (e.section == "eval") {
            if (e.key == "what") {
                if (e.value.size() > 1) need(e, 1);
                cfg.eval.what = e.value.empty() ? "" : e.value[0];
            } else if (e.key == "grid") {
                need(e, 5);
                cfg.eval.has_grid = true;
                cfg.eval.a1 = to_double(e.value[0], w);
                cfg.eval.b1 = to_double(e.value[1], w);
                cfg.eval.a2 = to_double(e.value[2], w);
                cfg.eval.b2 = to_double(e.value[3], w);
                cfg.eval.h = to_double(e.value[4], w);
            } else if (e.key == "point") {
                need(e, 2);
                cfg.eval.points.emplace_back(to_double(e.value[0], w),
                                             to_double(e.value[1], w));
            } else if (e.key == "r") {
                need(e, 1);
                cfg.eval.radii.push_back(to_double(e.value[0], w));
            } else if (e.key == "r_max") {
                need(e, 1);
                cfg.eval.r_max = to_double(e.value[0], w);
            } else if (e.key == "tol") {
                need(e, 1);
                cfg.eval.tol = to_double(e.value[0], w);
            } else if (e.key == "format") {
                need(e, 1);
                if (e.value[0] != "csv" && e.value[0] != "bin") {
                    throw ConfigError(w + ": format must be csv or bin");
                }
                cfg.eval.format = e.value[0];
            } else if (e.key == "out") {
                need(e, 1);
                cfg.eval.out = e.value[0];
            } else {
                unknown_key(e);
            }
        } else if (e.section == "solve") {
            if (e.key == "domain") {
                need(e, 4);
                cfg.solve.a1 = to_double(e.value[0], w);
                cfg.solve.b1 = to_double(e.value[1], w);
                cfg.solve.a2 = to_double(e.value[2], w);
                cfg.solve.b2 = to_double(e.value[3], w);
            } else if (e.key == "h") {
                need(e, 1);
                cfg.solve.h = to_double(e.value[0], w);
            } else if (e.key == "max_iters") {
                need(e, 1);
                cfg.solve.newton.max_iters = static_cast<int>(to_long(e.value[0], w));
            } else if (e.key == "residual_tol") {
                need(e, 1);
                cfg.solve.newton.residual_tol = to_double(e.value[0], w);
            } else if (e.key == "damping") {
                need(e, 1);
                cfg.solve.newton.damping = to_double(e.value[0], w);
            } else if (e.key == "levels") {
                need(e, 1);
                cfg.solve.newton.coarse_levels = static_cast<int>(to_long(e.value[0], w));
            } else if (e.key == "exec") {
                need(e, 1);
                if (e.value[0] == "serial") {
                    cfg.solve.newton.exec = Exec::Serial;
                } else if (e.value[0] == "parallel") {
                    cfg.solve.newton.exec = Exec::Parallel;
                } else {
                    throw ConfigError(w + ": exec must be serial or parallel");
                }
            } else if (e.key == "initial") {
                need(e, 1);
                if (e.value[0] != "sub" && e.value[0] != "mid") {
                    throw ConfigError(w + ": initial must be sub or mid");
                }
                cfg.solve.initial = e.value[0];
            } else if (e.key == "out") {
                need(e, 1);
                cfg.solve.out = e.value[0];
            } else {
                unknown_key(e);
            }
        } else if (e.section == "verify") {
            if (e.key == "seed") {
                need(e, 1);
                cfg.verify.seed = static_cast<unsigned long>(to_long(e.value[0], w));
            } else if (e.key == "n_measures") {
                need(e, 1);
                cfg.verify.n_measures = static_cast<int>(to_long(e.value[0], w));
            } else if (e.key == "n_points") {
                need(e, 1);
                cfg.verify.n_points = static_cast<int>(to_long(e.value[0], w));
            } else if (e.key == "r_list") {
                if (e.value.empty()) throw ConfigError(w + ": r_list is empty");
                cfg.verify.r_list.clear();
                for (const auto& tok : e.value) {
                    cfg.verify.r_list.push_back(to_double(tok, w));
                }
            } else if (e.key == "k") {
                need(e, 1);
                const long k = to_long(e.value[0], w);
                if (k != 0 && k != 2 && k != 3) {
                    throw ConfigError(w + ": k must be 0, 2, or 3");
                }
                cfg.verify.k = static_cast<int>(k);
            } else {
                unknown_key(e);
            }
        } else if (e.section == "figures") {
            if (e.key == "out_dir") {
                need(e, 1);
                cfg.figures.out_dir = e.value[0];
            } else if (e.key == "extent") {
                need(e, 1);
                cfg.figures.extent = to_double(e.value[0], w);
            } else if (e.key == "n") {
                need(e, 1);
                cfg.figures.n = static_cast<int>(to_long(e.value[0], w));
            } else if (e.key == "r_list") {
                cfg.figures.r_list.clear();
                for (const auto& tok : e.value) {
                    cfg.figures.r_list.push_back(to_double(tok, w));
                }
            } else if (e.key == "offsets") {
                need(e, 3);
                for (int i = 0; i < 3; ++i) {
                    cfg.figures.offsets[i] = to_double(e.value[i], w);
                }
            } else {
                unknown_key(e);
            }
        } else {
            unknown_key(e);
        }
    }

    if (cfg.has_measure) {
        try {
            validate(cfg.measure);
        } catch (const Error& err) {
            throw ConfigError(std::string("[measure]: ") + err.what());
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config: " + path);
    return parse_config(is);
}

namespace {

void put(std::string& out, const char* fmt, ...) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    out += buf;
}

}  // namespace

std::string render_config(const RunConfig& c) {
    std::string out;
    put(out, "[params]\nalpha = %.17g\nc0 = %.17g\ndim = %d\n", c.params.alpha,
        c.params.c0, c.params.dim);
    if (c.has_measure) {
        out += "\n[measure]\n";
        for (const auto& atom : c.measure.atoms) {
            put(out, "atom = %.17g %.17g\n", std::atan2(atom.nu[1], atom.nu[0]),
                atom.mass);
        }
        for (const auto& arc : c.measure.arcs) {
            put(out, "arc = %.17g %.17g\n", arc.theta_lo, arc.theta_hi);
        }
    }
    if (c.has_planes) {
        out += "\n[planes]\n";
        for (const auto& p : c.planes) {
            if (std::isinf(p.gamma)) {
                put(out, "plane = %.17g inf\n", p.angle);
            } else {
                put(out, "plane = %.17g %.17g\n", p.angle, p.gamma);
            }
        }
    }
    if (c.has_profile) {
        out += "\n[profile]\n";
        for (double t : c.profile_thetas) put(out, "theta = %.17g\n", t);
        if (!c.profile_sigmas.empty()) {
            out += "sigma =";
            for (int s : c.profile_sigmas) put(out, " %d", s);
            out += "\n";
        }
        put(out, "lambda0 = %.17g\n", c.lambda0);
    }
    if (c.arc.present) {
        put(out, "\n[arc]\ntheta1 = %.17g\ntheta2 = %.17g\nlambda = %.17g\n",
            c.arc.theta1, c.arc.theta2, c.arc.lambda);
    }
    out += "\n[eval]\n";
    if (!c.eval.what.empty()) put(out, "what = %s\n", c.eval.what.c_str());
    if (c.eval.has_grid) {
        put(out, "grid = %.17g %.17g %.17g %.17g %.17g\n", c.eval.a1, c.eval.b1,
            c.eval.a2, c.eval.b2, c.eval.h);
    }
    for (const auto& p : c.eval.points) put(out, "point = %.17g %.17g\n", p[0], p[1]);
    for (double r : c.eval.radii) put(out, "r = %.17g\n", r);
    put(out, "r_max = %.17g\ntol = %.17g\nformat = %s\nout = %s\n", c.eval.r_max,
        c.eval.tol, c.eval.format.c_str(), c.eval.out.c_str());
    put(out, "\n[solve]\ndomain = %.17g %.17g %.17g %.17g\nh = %.17g\n", c.solve.a1,
        c.solve.b1, c.solve.a2, c.solve.b2, c.solve.h);
    put(out, "max_iters = %d\nresidual_tol = %.17g\ndamping = %.17g\nlevels = %d\nexec = %s\n",
        c.solve.newton.max_iters, c.solve.newton.residual_tol,
        c.solve.newton.damping, c.solve.newton.coarse_levels,
        c.solve.newton.exec == Exec::Serial ? "serial" : "parallel");
    put(out, "initial = %s\nout = %s\n", c.solve.initial.c_str(), c.solve.out.c_str());
    put(out, "\n[verify]\nseed = %lu\nn_measures = %d\nn_points = %d\n",
        c.verify.seed, c.verify.n_measures, c.verify.n_points);
    out += "r_list =";
    for (double r : c.verify.r_list) put(out, " %.17g", r);
    put(out, "\nk = %d\n", c.verify.k);
    put(out, "\n[figures]\nout_dir = %s\nextent = %.17g\nn = %d\n",
        c.figures.out_dir.c_str(), c.figures.extent, c.figures.n);
    if (!c.figures.r_list.empty()) {
        out += "r_list =";
        for (double r : c.figures.r_list) put(out, " %.17g", r);
        out += "\n";
    }
    put(out, "offsets = %.17g %.17g %.17g\n", c.figures.offsets[0],
        c.figures.offsets[1], c.figures.offsets[2]);
    return out;
}

PlaneSpec planes_spec(const RunConfig& config) {
    if (!config.has_planes) throw ConfigError("[planes] section is required");
    std::vector<double> thetas, gammas;
    for (const auto& p : config.planes) {
        thetas.push_back(p.angle);
        gammas.push_back(p.gamma);
    }
    return make_plane_spec_angles(config.params, thetas, gammas);
}

SphereMeasure planes_measure(const RunConfig& config) {
    if (!config.has_planes) throw ConfigError("[planes] section is required");
    SphereMeasure mu;
    mu.dim = config.params.dim;
    for (const auto& p : config.planes) {
        if (p.lambda > 0.0) mu.add_atom_at_angle(p.angle, p.lambda);
    }
    validate(mu);
    return mu;
}

}  // namespace fmcm

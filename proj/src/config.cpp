#include "mavel/config.hpp"

#include "mavel/errors.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

namespace mavel {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double d = std::stod(value, &used);
        if (used != value.size()) {
            throw ConfigError("");
        }
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config: '" + key + "' expects a number, got '" + value + "'");
    }
}

long long to_integer(const std::string& key, const std::string& value) {
    long long out = 0;
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError("config: '" + key + "' expects an integer, got '" + value + "'");
    }
    return out;
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true" || value == "yes" || value == "on") {
        return true;
    }
    if (value == "0" || value == "false" || value == "no" || value == "off") {
        return false;
    }
    throw ConfigError("config: '" + key + "' expects a boolean, got '" + value + "'");
}

std::string fmt(double d) {
    std::ostringstream os;
    os.precision(17);
    os << d;
    return os.str();
}

struct Field {
    const char* key;
    std::function<void(ProblemConfig&, const std::string&, const std::string&)> set;
    std::function<std::string(const ProblemConfig&)> get;
};

#define MAVEL_REAL(name)                                                                     \
    Field {                                                                                  \
        #name, [](ProblemConfig& c, const std::string& k,                                    \
                  const std::string& v) { c.name = to_double(k, v); },                       \
            [](const ProblemConfig& c) { return fmt(c.name); }                               \
    }
#define MAVEL_INT(name)                                                                      \
    Field {                                                                                  \
        #name, [](ProblemConfig& c, const std::string& k,                                    \
                  const std::string& v) { c.name = static_cast<int>(to_integer(k, v)); },    \
            [](const ProblemConfig& c) { return std::to_string(c.name); }                    \
    }

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        MAVEL_REAL(T),
        MAVEL_REAL(L),
        MAVEL_REAL(V_max),
        MAVEL_REAL(m_a),
        MAVEL_REAL(alpha1),
        MAVEL_REAL(alpha2),
        MAVEL_REAL(eta),
        MAVEL_INT(N),
        MAVEL_REAL(eps_out),
        MAVEL_REAL(eps_in),
        MAVEL_INT(max_inner),
        MAVEL_INT(max_outer),
        MAVEL_INT(grid_points),
        Field{"include_terminal_kinetic",
              [](ProblemConfig& c, const std::string& k, const std::string& v) {
                  c.include_terminal_kinetic = to_bool(k, v);
              },
              [](const ProblemConfig& c) {
                  return std::string(c.include_terminal_kinetic ? "true" : "false");
              }},
        MAVEL_REAL(solver_feastol),
        MAVEL_REAL(solver_gaptol),
        MAVEL_INT(solver_max_iter),
        MAVEL_INT(trapezoid_candidates),
        MAVEL_REAL(wavelength),
        MAVEL_REAL(noise_power),
        MAVEL_REAL(pilot_power),
        MAVEL_REAL(gain),
        MAVEL_INT(snapshots),
        MAVEL_INT(theta_grid),
        Field{"seed",
              [](ProblemConfig& c, const std::string& k, const std::string& v) {
                  const long long s = to_integer(k, v);
                  if (s < 0) {
                      throw ConfigError("config: seed must be nonnegative");
                  }
                  c.seed = static_cast<std::uint64_t>(s);
              },
              [](const ProblemConfig& c) { return std::to_string(c.seed); }},
    };
    return table;
}

#undef MAVEL_REAL
#undef MAVEL_INT

} // namespace

void ProblemConfig::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) {
            throw InvalidArgument(std::string("invalid configuration: ") + what);
        }
    };
    require(T > 0.0, "T > 0");
    require(L > 0.0, "L > 0");
    require(V_max > 0.0, "V_max > 0");
    require(m_a >= 0.0, "m_a >= 0");
    require(alpha1 >= 0.0, "alpha1 >= 0");
    require(alpha2 >= 0.0, "alpha2 >= 0");
    require(eta > 0.0 && eta <= 1.0, "0 < eta <= 1");
    require(N >= 1, "N >= 1");
    require(eps_out >= 0.0 && eps_in >= 0.0, "tolerances >= 0");
    require(max_inner >= 1 && max_outer >= 1, "iteration limits >= 1");
    require(grid_points >= 3, "grid_points >= 3");
    require(solver_max_iter >= 1, "solver_max_iter >= 1");
    require(trapezoid_candidates >= 1, "trapezoid_candidates >= 1");
    require(wavelength > 0.0 && noise_power > 0.0 && pilot_power > 0.0,
            "positive sensing constants");
    require(snapshots >= 2, "snapshots >= 2");
    require(theta_grid >= 3, "theta_grid >= 3");
}

void apply_override(ProblemConfig& cfg, const std::string& key, const std::string& value) {
    const std::string k = trim(key);
    const std::string v = trim(value);
    for (const auto& f : fields()) {
        if (k == f.key) {
            f.set(cfg, k, v);
            return;
        }
    }
    throw ConfigError("config: unknown key '" + k + "'");
}

ProblemConfig parse_config(const std::string& text, const std::string& origin,
                           ProblemConfig base) {
    ProblemConfig cfg = base;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        }
        try {
            apply_override(cfg, line.substr(0, eq), line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

ProblemConfig load_config(const std::filesystem::path& path, ProblemConfig base) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file '" + path.string() + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path.string(), base);
}

std::vector<std::pair<std::string, std::string>> describe(const ProblemConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& f : fields()) {
        out.emplace_back(f.key, f.get(cfg));
    }
    return out;
}

} // namespace mavel

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include <json.hpp>

#include "pointint/cli.hpp"

namespace pointint::cli {

using nlohmann::json;

namespace {

constexpr std::string_view kNames[] = {"scatter",     "bound",         "chain",
                                       "gauge-map",   "evolve",        "equivalence",
                                       "fewbody-solve", "fewbody-gauge", "fewbody-ground"};

// Strict view of one JSON object: every key must be consumed before finish().
class Object {
public:
    Object(const json& value, std::string path) : value_(value), path_(std::move(path)) {
        if (!value_.is_object()) fail(path_, "expected an object");
    }

    [[nodiscard]] const std::string& path() const { return path_; }
    [[nodiscard]] std::string path_of(const std::string& key) const { return path_ + "." + key; }

    const json* find(const std::string& key) {
        auto it = value_.find(key);
        if (it == value_.end()) return nullptr;
        used_.insert(key);
        return &*it;
    }

    double number(const std::string& key, double fallback) {
        const json* v = find(key);
        return v ? as_number(*v, path_of(key)) : fallback;
    }

    std::size_t count(const std::string& key, std::size_t fallback) {
        const json* v = find(key);
        if (!v) return fallback;
        if (!v->is_number_integer() || v->get<long long>() < 0) {
            fail(path_of(key), "expected a non-negative integer");
        }
        return v->get<std::size_t>();
    }

    std::string string(const std::string& key, const std::string& fallback) {
        const json* v = find(key);
        if (!v) return fallback;
        if (!v->is_string()) fail(path_of(key), "expected a string");
        return v->get<std::string>();
    }

    void finish() const {
        for (const auto& item : value_.items()) {
            if (!used_.count(item.key())) fail(path_of(item.key()), "unknown key \"" + item.key() + "\"");
        }
    }

    [[noreturn]] static void fail(const std::string& path, const std::string& what) {
        throw ConfigError(path + ": " + what);
    }

    static double as_number(const json& v, const std::string& path) {
        if (!v.is_number()) fail(path, "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) fail(path, "expected a finite number");
        return d;
    }

private:
    const json& value_;
    std::string path_;
    std::set<std::string> used_;
};

std::vector<double> number_array(const json& v, const std::string& path) {
    if (!v.is_array()) Object::fail(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(Object::as_number(v[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

// Re-raises module precondition failures with the config path attached.
template <class F>
auto at_path(const std::string& path, F&& build) -> decltype(build()) {
    try {
        return build();
    } catch (const ConfigError&) {
        throw;
    } catch (const ValidationError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

BoundaryCondition parse_bc(const json& v, const std::string& path) {
    Object o(v, path);
    const double phi = o.number("phi", 0.0);
    const double a = o.number("a", 1.0);
    const double b = o.number("b", 0.0);
    const double c = o.number("c", 0.0);
    const double d = o.number("d", 1.0);
    o.finish();
    return at_path(path, [&] { return make_bc(phi, a, b, c, d); });
}

BoundaryCondition optional_bc(Object& o, const std::string& key) {
    const json* v = o.find(key);
    return v ? parse_bc(*v, o.path_of(key)) : BoundaryCondition{};
}

Range parse_range(Object& parent, const std::string& key, Range fallback, bool positive) {
    const json* v = parent.find(key);
    if (!v) return fallback;
    const std::string path = parent.path_of(key);
    Object o(*v, path);
    Range r;
    r.start = o.number("start", fallback.start);
    r.stop = o.number("stop", fallback.stop);
    r.count = o.count("count", fallback.count);
    o.finish();
    if (r.count == 0) Object::fail(path + ".count", "must be at least 1");
    if (r.stop < r.start) Object::fail(path, "stop must not be below start");
    if (r.count > 1 && r.stop == r.start) Object::fail(path, "a multi-point range needs stop > start");
    if (positive && !(r.start > 0.0)) Object::fail(path + ".start", "must be positive");
    return r;
}

GridSpec parse_grid(Object& parent, const GridSpec& fallback) {
    const json* v = parent.find("grid");
    if (!v) return fallback;
    const std::string path = parent.path_of("grid");
    Object o(*v, path);
    const double x_min = o.number("x_min", fallback.x_min());
    const double x_max = o.number("x_max", fallback.x_max());
    const std::size_t n = o.count("n_cells", fallback.n_cells());
    o.finish();
    return at_path(path, [&] { return GridSpec(x_min, x_max, n); });
}

PacketConfig parse_packet(Object& parent) {
    PacketConfig p;
    const json* v = parent.find("packet");
    if (!v) return p;
    Object o(*v, parent.path_of("packet"));
    p.x0 = o.number("x0", p.x0);
    p.k0 = o.number("k0", p.k0);
    p.sigma = o.number("sigma", p.sigma);
    o.finish();
    if (!(p.sigma > 0.0)) Object::fail(o.path_of("sigma"), "must be positive");
    return p;
}

PhaseSchedule parse_schedule(const json& v, const std::string& path, const PhaseSchedule& fallback) {
    Object o(v, path);
    if (const json* table = o.find("table")) {
        if (!table->is_array()) Object::fail(path + ".table", "expected an array of [time, phase] pairs");
        std::vector<std::pair<double, double>> rows;
        for (std::size_t i = 0; i < table->size(); ++i) {
            const std::string row_path = path + ".table[" + std::to_string(i) + "]";
            const auto row = number_array((*table)[i], row_path);
            if (row.size() != 2) Object::fail(row_path, "expected [time, phase]");
            rows.emplace_back(row[0], row[1]);
        }
        if (o.find("phi0") || o.find("rate")) Object::fail(path, "give either table or phi0/rate");
        o.finish();
        return at_path(path + ".table", [&] { return PhaseSchedule::tabulated(std::move(rows)); });
    }
    const double phi0 = o.number("phi0", fallback.phi0());
    const double rate = o.number("rate", fallback.rate());
    o.finish();
    return PhaseSchedule::constant_rate(phi0, rate);
}

void positive(double v, const std::string& path) {
    if (!(v > 0.0)) Object::fail(path, "must be positive");
}

std::size_t positive_count(Object& o, const std::string& key, std::size_t fallback) {
    const std::size_t n = o.count(key, fallback);
    if (n == 0) Object::fail(o.path_of(key), "must be positive");
    return n;
}

fewbody::PairParams parse_pairs(const json& v, const std::string& path, int n, double c) {
    Object o(v, path);
    const std::size_t pairs = static_cast<std::size_t>(n * (n - 1) / 2);
    std::vector<double> amplitudes(pairs, 1.0);
    std::vector<double> phases(pairs, 0.0);
    if (const json* a = o.find("amplitudes")) amplitudes = number_array(*a, path + ".amplitudes");
    if (const json* p = o.find("phases")) phases = number_array(*p, path + ".phases");
    o.finish();
    return at_path(path, [&] { return fewbody::PairParams(n, c, amplitudes, phases); });
}

FewbodySolveConfig parse_fewbody_problem(Object& o) {
    FewbodySolveConfig cfg;
    std::vector<double> k = cfg.momenta.values();
    if (const json* v = o.find("momenta")) k = number_array(*v, o.path_of("momenta"));
    const int n = static_cast<int>(k.size());
    if (n > fewbody::kMaxParticles) {
        Object::fail(o.path_of("momenta"), "at most " + std::to_string(fewbody::kMaxParticles) + " particles");
    }
    cfg.momenta = at_path(o.path_of("momenta"), [&] { return fewbody::Momenta(k); });
    cfg.c = o.number("c", cfg.c);
    std::string incoming;
    for (int i = 1; i <= n; ++i) incoming += static_cast<char>('0' + i);
    incoming = o.string("incoming", incoming);
    cfg.incoming = at_path(o.path_of("incoming"), [&] { return fewbody::parse_permutation(incoming, n); });
    const std::size_t samples = positive_count(o, "wall_samples", 20);
    cfg.wall_samples = static_cast<int>(samples);
    return cfg;
}

Parameters parse_parameters(Command command, Object& o) {
    switch (command) {
        case Command::Scatter: {
            ScatterConfig cfg;
            cfg.bc = optional_bc(o, "bc");
            cfg.k = parse_range(o, "k_grid", cfg.k, true);
            return cfg;
        }
        case Command::Bound: {
            BoundConfig cfg;
            cfg.bc = optional_bc(o, "bc");
            return cfg;
        }
        case Command::Chain: {
            ChainConfig cfg;
            std::vector<ChainSite> sites;
            if (const json* v = o.find("sites")) {
                const std::string path = o.path_of("sites");
                if (!v->is_array()) Object::fail(path, "expected an array of sites");
                for (std::size_t i = 0; i < v->size(); ++i) {
                    const std::string site_path = path + "[" + std::to_string(i) + "]";
                    Object site(v->at(i), site_path);
                    const json* pos = site.find("position");
                    if (!pos) Object::fail(site_path, "missing key \"position\"");
                    const double x = Object::as_number(*pos, site.path_of("position"));
                    sites.push_back({x, optional_bc(site, "bc")});
                    site.finish();
                }
                cfg.chain = at_path(path, [&] { return InteractionChain(sites); });
            }
            cfg.k = parse_range(o, "k_grid", cfg.k, true);
            return cfg;
        }
        case Command::GaugeMap: {
            GaugeMapConfig cfg;
            cfg.alpha = parse_range(o, "alpha_grid", cfg.alpha, false);
            return cfg;
        }
        case Command::Evolve: {
            EvolveConfig cfg;
            cfg.grid = parse_grid(o, cfg.grid);
            cfg.packet = parse_packet(o);
            const std::string mode = o.string("mode", "interface");
            if (mode == "interface") {
                cfg.mode = EvolveConfig::Mode::Interface;
            } else if (mode == "step") {
                cfg.mode = EvolveConfig::Mode::Step;
            } else {
                Object::fail(o.path_of("mode"), "expected \"interface\" or \"step\"");
            }
            cfg.bc = optional_bc(o, "bc");
            if (const json* v = o.find("schedule")) cfg.schedule = parse_schedule(*v, o.path_of("schedule"), cfg.schedule);
            cfg.h = o.number("h", cfg.h);
            cfg.dt = o.number("dt", cfg.dt);
            positive(cfg.dt, o.path_of("dt"));
            cfg.n_steps = positive_count(o, "n_steps", cfg.n_steps);
            cfg.series_stride = positive_count(o, "series_stride", cfg.series_stride);
            cfg.snapshot_stride = o.count("snapshot_stride", cfg.snapshot_stride);
            cfg.boundary_density_limit = o.number("boundary_density_limit", cfg.boundary_density_limit);
            positive(cfg.boundary_density_limit, o.path_of("boundary_density_limit"));
            return cfg;
        }
        case Command::Equivalence: {
            EquivalenceConfig cfg;
            auto& p = cfg.params;
            p.grid = parse_grid(o, p.grid);
            const PacketConfig packet = parse_packet(o);
            p.x0 = packet.x0;
            p.k0 = packet.k0;
            p.sigma = packet.sigma;
            p.h = o.number("h", p.h);
            p.dt = o.number("dt", p.dt);
            positive(p.dt, o.path_of("dt"));
            p.n_steps = positive_count(o, "n_steps", p.n_steps);
            p.boundary_density_limit = o.number("boundary_density_limit", p.boundary_density_limit);
            positive(p.boundary_density_limit, o.path_of("boundary_density_limit"));
            return cfg;
        }
        case Command::FewbodySolve:
            return parse_fewbody_problem(o);
        case Command::FewbodyGauge: {
            FewbodyGaugeConfig cfg;
            cfg.problem = parse_fewbody_problem(o);
            if (const json* v = o.find("pairs")) {
                cfg.pairs = parse_pairs(*v, o.path_of("pairs"), cfg.problem.momenta.size(), cfg.problem.c);
            }
            return cfg;
        }
        case Command::FewbodyGround: {
            FewbodyGroundConfig cfg;
            const std::size_t n = o.count("n", 3);
            if (n < 2 || n > static_cast<std::size_t>(fewbody::kMaxParticles)) {
                Object::fail(o.path_of("n"), "must lie in [2, " + std::to_string(fewbody::kMaxParticles) + "]");
            }
            cfg.n = static_cast<int>(n);
            cfg.c = o.number("c", cfg.c);
            if (const json* v = o.find("pairs")) cfg.pairs = parse_pairs(*v, o.path_of("pairs"), cfg.n, cfg.c);
            cfg.wall_samples = static_cast<int>(positive_count(o, "wall_samples", 20));
            return cfg;
        }
    }
    throw ConfigError("$: unsupported command");
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
    for (std::size_t i = 0; i < std::size(kNames); ++i) {
        if (kNames[i] == name) return static_cast<Command>(i);
    }
    return std::nullopt;
}

std::string_view command_name(Command command) { return kNames[static_cast<std::size_t>(command)]; }

const std::vector<std::string_view>& command_names() {
    static const std::vector<std::string_view> names(std::begin(kNames), std::end(kNames));
    return names;
}

std::vector<double> Range::values() const {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = count == 1 ? start
                            : start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    if (count > 1) out.back() = stop;
    return out;
}

RunConfig parse_config(Command command, std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("$: invalid JSON: ") + e.what());
    }
    Object root(doc, "$");
    if (const json* v = root.find("command")) {
        if (!v->is_string() || v->get<std::string>() != command_name(command)) {
            Object::fail("$.command", "does not match the requested command \"" +
                                          std::string(command_name(command)) + "\"");
        }
    }
    if (const json* v = root.find("schema_version")) {
        if (!v->is_number_integer() || v->get<int>() != kSchemaVersion) {
            Object::fail("$.schema_version", "unsupported schema version");
        }
    }
    RunConfig cfg;
    cfg.command = command;
    cfg.params = parse_parameters(command, root);
    root.finish();
    return cfg;
}

std::string format_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", value == 0.0 ? 0.0 : value);
    return buf;
}

}  // namespace pointint::cli

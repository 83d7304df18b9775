#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "pointint/cli.hpp"

namespace pointint::cli {

using nlohmann::ordered_json;

namespace {

// Writes JSON with every float in fixed 17-digit scientific form so that
// reports are byte-reproducible.
void write_json(std::ostream& os, const ordered_json& v, int depth) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
    switch (v.type()) {
        case ordered_json::value_t::object: {
            if (v.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (const auto& item : v.items()) {
                if (!first) os << ",\n";
                first = false;
                os << pad << ordered_json(item.key()).dump() << ": ";
                write_json(os, item.value(), depth + 1);
            }
            os << "\n" << close_pad << "}";
            return;
        }
        case ordered_json::value_t::array: {
            if (v.empty()) {
                os << "[]";
                return;
            }
            os << "[\n";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) os << ",\n";
                os << pad;
                write_json(os, v[i], depth + 1);
            }
            os << "\n" << close_pad << "]";
            return;
        }
        case ordered_json::value_t::number_float: {
            const double d = v.get<double>();
            if (std::isfinite(d)) {
                os << format_number(d);
            } else {
                os << "null";
            }
            return;
        }
        default:
            os << v.dump();
    }
}

class Output {
public:
    explicit Output(std::filesystem::path dir) : dir_(std::move(dir)) {
        std::filesystem::create_directories(dir_);
    }

    void json(const std::string& name, const ordered_json& body) const {
        std::ofstream os = open(name);
        write_json(os, body, 0);
        os << "\n";
    }

    void csv(const std::string& name, const std::vector<std::string>& columns,
             const std::vector<std::vector<double>>& rows) const {
        std::ofstream os = open(name);
        os << "# schema_version=" << kSchemaVersion << "\n";
        for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
        os << "\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
            os << "\n";
        }
    }

    void text(const std::string& name, const std::string& body) const { open(name) << body; }

private:
    std::ofstream open(const std::string& name) const {
        std::ofstream os(dir_ / name, std::ios::binary);
        if (!os) throw std::runtime_error("cannot write " + (dir_ / name).string());
        return os;
    }

    std::filesystem::path dir_;
};

ordered_json header(Command command) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = std::string(command_name(command));
    return j;
}

ordered_json complex_json(Complex z) { return ordered_json{{"re", z.real()}, {"im", z.imag()}}; }

ordered_json bc_json(const BoundaryCondition& bc) {
    return ordered_json{{"phi", bc.phi()}, {"a", bc.a()}, {"b", bc.b()}, {"c", bc.c()}, {"d", bc.d()}};
}

// Evaluates f at every index in [0, n) on up to `jobs` threads; results keep
// their index, so the output does not depend on the thread count.
template <class T, class F>
std::vector<T> sweep(std::size_t n, unsigned jobs, F f) {
    std::vector<T> out(n);
    const std::size_t workers = std::min<std::size_t>(std::max(1u, jobs), std::max<std::size_t>(n, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
        return out;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) out[i] = f(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

const std::vector<std::string> kScatterColumns = {"k",         "r_left_re",  "r_left_im",  "t_left_re",
                                                  "t_left_im", "r_right_re", "r_right_im", "t_right_re",
                                                  "t_right_im", "R",         "T"};

ordered_json write_scattering(const Output& out, const std::string& file,
                              const std::vector<ScatteringSolution>& sols) {
    std::vector<std::vector<double>> rows;
    double defect = 0.0;
    for (const auto& s : sols) {
        rows.push_back({s.k, s.r_left.real(), s.r_left.imag(), s.t_left.real(), s.t_left.imag(),
                        s.r_right.real(), s.r_right.imag(), s.t_right.real(), s.t_right.imag(),
                        std::norm(s.r_left), std::norm(s.t_left)});
        defect = std::max({defect, s.unitarity_defect_left(), s.unitarity_defect_right()});
    }
    out.csv(file, kScatterColumns, rows);
    return ordered_json{{"points", sols.size()}, {"max_unitarity_defect", defect}, {"data", file}};
}

ordered_json range_json(const Range& r) {
    return ordered_json{{"start", r.start}, {"stop", r.stop}, {"count", r.count}};
}

void run_scatter(const ScatterConfig& cfg, const RunConfig& rc, const Output& out) {
    const auto ks = cfg.k.values();
    const auto sols = sweep<ScatteringSolution>(ks.size(), rc.jobs, [&](std::size_t i) {
        return scatter(cfg.bc, ks[i]);
    });
    ordered_json j = header(rc.command);
    j["bc"] = bc_json(cfg.bc);
    j["k_grid"] = range_json(cfg.k);
    j["result"] = write_scattering(out, "scatter.csv", sols);
    out.json("summary.json", j);
}

void run_bound(const BoundConfig& cfg, const RunConfig& rc, const Output& out) {
    ordered_json states = ordered_json::array();
    for (const auto& s : bound_states(cfg.bc)) {
        states.push_back({{"kappa", s.kappa},
                          {"energy", s.energy},
                          {"left_value", complex_json(s.left_value)},
                          {"right_value", complex_json(s.right_value)}});
    }
    ordered_json j = header(rc.command);
    j["bc"] = bc_json(cfg.bc);
    j["states"] = states;
    out.json("bound.json", j);
}

void run_chain(const ChainConfig& cfg, const RunConfig& rc, const Output& out) {
    const auto ks = cfg.k.values();
    const auto sols = sweep<ScatteringSolution>(ks.size(), rc.jobs, [&](std::size_t i) {
        return chain_scatter(cfg.chain, ks[i]);
    });
    ordered_json sites = ordered_json::array();
    for (const auto& s : cfg.chain.sites()) sites.push_back({{"position", s.position}, {"bc", bc_json(s.bc)}});
    ordered_json j = header(rc.command);
    j["sites"] = sites;
    j["k_grid"] = range_json(cfg.k);
    j["result"] = write_scattering(out, "chain.csv", sols);
    out.json("summary.json", j);
}

void run_gauge_map(const GaugeMapConfig& cfg, const RunConfig& rc, const Output& out) {
    std::vector<std::vector<double>> rows;
    for (double alpha : cfg.alpha.values()) {
        rows.push_back({alpha, bc_from_gauge_strength(GaugeStrength{alpha}).phi()});
    }
    out.csv("gauge_map.csv", {"alpha", "phi"}, rows);
    ordered_json j = header(rc.command);
    j["alpha_grid"] = range_json(cfg.alpha);
    j["result"] = {{"points", rows.size()}, {"data", "gauge_map.csv"}};
    out.json("summary.json", j);
}

std::string snapshot_name(std::size_t step) {
    std::ostringstream name;
    name << "snapshot_" << std::setw(6) << std::setfill('0') << step << ".csv";
    return name.str();
}

void run_evolve(const EvolveConfig& cfg, const RunConfig& rc, const Output& out) {
    const WaveState initial = gaussian_packet(cfg.grid, cfg.packet.x0, cfg.packet.k0, cfg.packet.sigma);
    const double initial_norm = l2_norm(initial);

    std::vector<std::vector<double>> series;
    std::vector<std::string> snapshots;
    EvolveOptions opts;
    opts.boundary_density_limit = cfg.boundary_density_limit;
    opts.observe_stride =
        cfg.snapshot_stride ? std::gcd(cfg.series_stride, cfg.snapshot_stride) : cfg.series_stride;
    opts.observer = [&](const WaveState& s) {
        const auto step = static_cast<std::size_t>(std::llround(s.time / cfg.dt));
        const bool last = step == cfg.n_steps;
        if (step % cfg.series_stride == 0 || last) {
            series.push_back({s.time, l2_norm(s), reflection_probability(s)});
        }
        if (cfg.snapshot_stride && (step % cfg.snapshot_stride == 0 || last)) {
            std::vector<std::vector<double>> rows;
            for (std::size_t j = 0; j < s.values.size(); ++j) {
                const Complex z = s.values[j];
                rows.push_back({s.grid.x(j), z.real(), z.imag(), std::norm(z)});
            }
            snapshots.push_back(snapshot_name(step));
            out.csv(snapshots.back(), {"x", "re", "im", "abs2"}, rows);
        }
    };

    const bool interface = cfg.mode == EvolveConfig::Mode::Interface;
    const Evolution ev = interface ? evolve_interface(initial, cfg.bc, cfg.schedule, cfg.dt, cfg.n_steps, opts)
                                   : evolve_step_potential(initial, cfg.h, cfg.dt, cfg.n_steps, opts);
    out.csv("timeseries.csv", {"time", "norm", "reflection_probability"}, series);

    ordered_json j = header(rc.command);
    j["mode"] = interface ? "interface" : "step";
    j["grid"] = {{"x_min", cfg.grid.x_min()}, {"x_max", cfg.grid.x_max()}, {"n_cells", cfg.grid.n_cells()}};
    j["packet"] = {{"x0", cfg.packet.x0}, {"k0", cfg.packet.k0}, {"sigma", cfg.packet.sigma}};
    j["dt"] = cfg.dt;
    j["n_steps"] = cfg.n_steps;
    j["result"] = {{"final_time", ev.state.time},
                   {"initial_norm", initial_norm},
                   {"final_norm", l2_norm(ev.state)},
                   {"norm_drift", ev.norm_drift},
                   {"reflection_probability", reflection_probability(ev.state)},
                   {"max_boundary_density", ev.max_boundary_density},
                   {"cfl_warning", ev.cfl_warning},
                   {"timeseries", "timeseries.csv"},
                   {"snapshots", snapshots}};
    out.json("summary.json", j);
}

void run_equivalence(const EquivalenceConfig& cfg, const RunConfig& rc, const Output& out) {
    const auto& p = cfg.params;
    const EquivalenceReport r = equivalence_run(p);
    ordered_json j = header(rc.command);
    j["parameters"] = {{"grid", {{"x_min", p.grid.x_min()}, {"x_max", p.grid.x_max()}, {"n_cells", p.grid.n_cells()}}},
                       {"packet", {{"x0", p.x0}, {"k0", p.k0}, {"sigma", p.sigma}}},
                       {"h", p.h},
                       {"dt", p.dt},
                       {"n_steps", p.n_steps}};
    j["l2_distance"] = r.l2_distance;
    j["reflection_interface"] = r.reflection_interface;
    j["reflection_step"] = r.reflection_step;
    j["reflection_free"] = r.reflection_free;
    j["norm_drift_interface"] = r.norm_drift_interface;
    j["norm_drift_step"] = r.norm_drift_step;
    j["norm_drift_free"] = r.norm_drift_free;
    j["max_boundary_density"] = r.max_boundary_density;
    j["final_time"] = r.final_time;
    out.json("equivalence.json", j);
}

// Amplitude table as JSON records plus a flat CSV.
ordered_json write_amplitudes(const Output& out, const std::string& stem,
                              const fewbody::PlaneWaveEigenfunction& psi) {
    const auto graph = fewbody::sectors(psi.n());
    const auto perms = fewbody::all_permutations(psi.n());
    ordered_json records = ordered_json::array();
    std::vector<std::vector<double>> rows;
    std::vector<std::string> keys;
    for (std::size_t s = 0; s < graph.sectors.size(); ++s) {
        for (std::size_t p = 0; p < perms.size(); ++p) {
            const Complex a = psi.amplitude(s, p);
            records.push_back({{"sector", fewbody::to_string(graph.sectors[s])},
                               {"permutation", fewbody::to_string(perms[p])},
                               {"re", a.real()},
                               {"im", a.imag()}});
            rows.push_back({a.real(), a.imag()});
            keys.push_back(fewbody::to_string(graph.sectors[s]) + "," + fewbody::to_string(perms[p]));
        }
    }
    std::ostringstream csv;
    csv << "# schema_version=" << kSchemaVersion << "\nsector,permutation,re,im\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        csv << keys[i] << "," << format_number(rows[i][0]) << "," << format_number(rows[i][1]) << "\n";
    }
    out.text(stem + ".csv", csv.str());
    return records;
}

ordered_json momenta_json(const std::vector<Complex>& k) {
    ordered_json arr = ordered_json::array();
    for (const Complex& z : k) arr.push_back(complex_json(z));
    return arr;
}

ordered_json pairs_json(const fewbody::PairParams& p) {
    ordered_json pairs = ordered_json::array();
    for (int i = 0; i < p.n(); ++i) {
        for (int j = i + 1; j < p.n(); ++j) {
            pairs.push_back({{"pair", std::to_string(i + 1) + std::to_string(j + 1)},
                             {"amplitude", p.amplitude(i, j)},
                             {"phase", p.phase(i, j)}});
        }
    }
    return pairs;
}

fewbody::PairParams random_pairs(int n, double c, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(0.5, 2.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    const std::size_t count = static_cast<std::size_t>(n * (n - 1) / 2);
    std::vector<double> a(count), phi(count);
    for (std::size_t i = 0; i < count; ++i) {
        a[i] = amp(rng);
        phi[i] = phase(rng);
    }
    return fewbody::PairParams(n, c, a, phi);
}

ordered_json eigenfunction_json(const Output& out, const std::string& stem,
                                const fewbody::PlaneWaveEigenfunction& psi, const fewbody::PairParams& params,
                                int wall_samples, std::uint64_t seed) {
    const Complex e = psi.energy();
    return {{"momenta", momenta_json(psi.momenta())},
            {"coupling", psi.coupling()},
            {"energy", complex_json(e)},
            {"consistency_residual", psi.consistency_residual()},
            {"bc_residual", fewbody::bc_residual(psi, params, wall_samples, seed)},
            {"amplitudes_csv", stem + ".csv"},
            {"amplitudes", write_amplitudes(out, stem, psi)}};
}

void run_fewbody_solve(const FewbodySolveConfig& cfg, const RunConfig& rc, const Output& out) {
    const auto psi = fewbody::solve_amplitudes(cfg.momenta, cfg.c, cfg.incoming);
    const int n = cfg.momenta.size();
    ordered_json j = header(rc.command);
    j["incoming"] = fewbody::to_string(cfg.incoming);
    j["momentum_energy"] = cfg.momenta.energy();
    j["eigenfunction"] =
        eigenfunction_json(out, "amplitudes", psi, fewbody::PairParams::uniform(n, cfg.c), cfg.wall_samples, rc.seed);
    out.json("amplitudes.json", j);
}

void run_fewbody_gauge(const FewbodyGaugeConfig& cfg, const RunConfig& rc, const Output& out) {
    const auto& pr = cfg.problem;
    const int n = pr.momenta.size();
    const auto params = cfg.pairs ? *cfg.pairs : random_pairs(n, pr.c, rc.seed);
    const auto psi = fewbody::solve_amplitudes(pr.momenta, pr.c, pr.incoming);
    const auto gauged = fewbody::apply_pair_gauge(psi, params);
    ordered_json j = header(rc.command);
    j["incoming"] = fewbody::to_string(pr.incoming);
    j["pairs"] = pairs_json(params);
    j["original"] = eigenfunction_json(out, "amplitudes", psi, fewbody::PairParams::uniform(n, pr.c),
                                       pr.wall_samples, rc.seed);
    j["gauged"] = eigenfunction_json(out, "amplitudes_gauged", gauged, params, pr.wall_samples, rc.seed);
    out.json("gauge.json", j);
}

void run_fewbody_ground(const FewbodyGroundConfig& cfg, const RunConfig& rc, const Output& out) {
    const auto gs = fewbody::ground_state(cfg.n, cfg.c);
    ordered_json j = header(rc.command);
    j["n"] = gs.n;
    j["beta"] = gs.beta;
    j["energy"] = gs.energy;
    j["eigenfunction"] = eigenfunction_json(out, "ground", gs.eigenfunction,
                                            fewbody::PairParams::uniform(cfg.n, cfg.c), cfg.wall_samples, rc.seed);
    if (cfg.pairs) {
        const auto gauged = fewbody::apply_pair_gauge(gs.eigenfunction, *cfg.pairs);
        j["pairs"] = pairs_json(*cfg.pairs);
        j["gauged"] = eigenfunction_json(out, "ground_gauged", gauged, *cfg.pairs, cfg.wall_samples, rc.seed);
    }
    out.json("ground.json", j);
}

}  // namespace

int run(const RunConfig& config, std::ostream& err) {
    const auto tag = std::string("pointint ") + std::string(command_name(config.command)) + ": ";
    try {
        const Output out(config.out_dir);
        std::visit(
            [&](const auto& p) {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, ScatterConfig>) run_scatter(p, config, out);
                else if constexpr (std::is_same_v<T, BoundConfig>) run_bound(p, config, out);
                else if constexpr (std::is_same_v<T, ChainConfig>) run_chain(p, config, out);
                else if constexpr (std::is_same_v<T, GaugeMapConfig>) run_gauge_map(p, config, out);
                else if constexpr (std::is_same_v<T, EvolveConfig>) run_evolve(p, config, out);
                else if constexpr (std::is_same_v<T, EquivalenceConfig>) run_equivalence(p, config, out);
                else if constexpr (std::is_same_v<T, FewbodySolveConfig>) run_fewbody_solve(p, config, out);
                else if constexpr (std::is_same_v<T, FewbodyGaugeConfig>) run_fewbody_gauge(p, config, out);
                else run_fewbody_ground(p, config, out);
            },
            config.params);
    } catch (const ValidationError& e) {
        err << tag << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        err << tag << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << tag << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace pointint::cli

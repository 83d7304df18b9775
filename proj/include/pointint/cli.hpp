#pragma once

// Batch front-end: strict JSON run configurations, dispatch to the solvers,
// CSV/JSON outputs stamped with a schema version.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pointint/bc.hpp"
#include "pointint/errors.hpp"
#include "pointint/fewbody.hpp"
#include "pointint/scattering.hpp"
#include "pointint/tdse.hpp"

namespace pointint::cli {

inline constexpr int kSchemaVersion = 1;

enum class Command {
    Scatter,
    Bound,
    Chain,
    GaugeMap,
    Evolve,
    Equivalence,
    FewbodySolve,
    FewbodyGauge,
    FewbodyGround,
};

std::optional<Command> parse_command(std::string_view name);
std::string_view command_name(Command command);
const std::vector<std::string_view>& command_names();

/// Config errors carry the JSON path of the offending value.
class ConfigError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// `count` evenly spaced values from start to stop inclusive.
struct Range {
    double start = 0.0;
    double stop = 0.0;
    std::size_t count = 1;

    [[nodiscard]] std::vector<double> values() const;
};

struct ScatterConfig {
    BoundaryCondition bc;
    Range k{0.05, 5.0, 100};
};

struct BoundConfig {
    BoundaryCondition bc;
};

struct ChainConfig {
    InteractionChain chain;
    Range k{0.05, 5.0, 100};
};

struct GaugeMapConfig {
    Range alpha{-10.0, 10.0, 201};
};

struct PacketConfig {
    double x0 = -50.0;
    double k0 = 1.0;
    double sigma = 4.0;
};

struct EvolveConfig {
    enum class Mode { Interface, Step };
    GridSpec grid{-80.0, 80.0, 4096};
    PacketConfig packet;
    Mode mode = Mode::Interface;
    BoundaryCondition bc;
    PhaseSchedule schedule = PhaseSchedule::constant_rate(0.0, 4.0);
    double h = 4.0;
    double dt = 5e-3;
    std::size_t n_steps = 8000;
    std::size_t series_stride = 100;
    std::size_t snapshot_stride = 0;
    double boundary_density_limit = 1e-8;
};

struct EquivalenceConfig {
    EquivalenceParams params{GridSpec(-80.0, 80.0, 4096), -50.0, 1.0, 4.0, 4.0, 5e-3, 8000, 1e-8};
};

struct FewbodySolveConfig {
    fewbody::Momenta momenta{{-1.0, 0.3, 1.7}};
    double c = 2.0;
    fewbody::Permutation incoming{0, 1, 2};
    int wall_samples = 20;
};

struct FewbodyGaugeConfig {
    FewbodySolveConfig problem;
    /// Drawn from the run seed (a in [0.5, 2], phi in [0, 2 pi)) when absent.
    std::optional<fewbody::PairParams> pairs;
};

struct FewbodyGroundConfig {
    int n = 3;
    double c = -1.0;
    std::optional<fewbody::PairParams> pairs;
    int wall_samples = 20;
};

using Parameters = std::variant<ScatterConfig, BoundConfig, ChainConfig, GaugeMapConfig, EvolveConfig,
                                EquivalenceConfig, FewbodySolveConfig, FewbodyGaugeConfig,
                                FewbodyGroundConfig>;

struct RunConfig {
    Command command = Command::Scatter;
    Parameters params;
    std::filesystem::path out_dir = ".";
    std::uint64_t seed = 0;
    unsigned jobs = 1;
};

/// Strict parse of a command's JSON parameter document: unknown keys and
/// wrongly typed values are ConfigErrors naming their JSON path; module
/// preconditions surface as ValidationErrors.
RunConfig parse_config(Command command, std::string_view json_text);

/// Runs the configuration and writes its outputs into config.out_dir.
/// Returns 0 on success, 1 on validation failure, 2 on numerical failure;
/// messages go to `err`.
int run(const RunConfig& config, std::ostream& err);

/// 17 significant digits in scientific notation.
std::string format_number(double value);

}  // namespace pointint::cli

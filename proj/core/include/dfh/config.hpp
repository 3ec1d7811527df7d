#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dfh/fem.hpp"
#include "dfh/mesh.hpp"

namespace dfh {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Preset { Example1, Example2, FiveSpot, Custom };

const char* preset_name(Preset p);

/// Problem fields settable under `preset = custom`.
struct CustomProblem {
    std::string domain;     // "unit_square" or "l_shape"; ignored when mesh_file is set
    std::string mesh_file;  // plain-text mesh
    double kappa{1.0};
    double nu{1.0};
    Vec2 f0{};
    Vec2 f1{};  // f1(s) = (f1.x s, f1.y s)
    std::vector<Point> diracs;
    std::vector<CornerFlux> flux;

    friend bool operator==(const CustomProblem& a, const CustomProblem& b);
};

struct ExperimentConfig {
    Preset preset{Preset::Example1};
    double p{1.0};
    int n_iterations{0};
    double picard_tol{1e-8};
    int picard_max_iter{200};
    bool picard_relative{false};
    int quad_degree{19};
    std::string output_dir{"."};
    bool export_vtk{false};
    bool export_csv{true};
    /// Write a snapshot every k rounds (0: final round only).
    int snapshot_every{0};
    std::optional<CustomProblem> custom;

    friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);
};

/// Parses `key = value` lines; `#` starts a comment. Throws ConfigError on
/// unknown keys, malformed or out-of-range values and missing required keys.
/// Informational messages (e.g. p = 1 outside the analysed range) are
/// appended to `notices` when given.
ExperimentConfig parse_config(std::istream& in, std::vector<std::string>* notices = nullptr);
ExperimentConfig load_config(const std::string& path, std::vector<std::string>* notices = nullptr);
std::string serialize_config(const ExperimentConfig& cfg);

/// Fills every ProblemData field for the configured preset.
ProblemData make_problem(const ExperimentConfig& cfg);
Mesh make_initial_mesh(const ExperimentConfig& cfg);

// Presets of the three experiments (estimator exponent p supplied by caller).
ProblemData example1_problem(double p);
ProblemData example2_problem(double p);
ProblemData fivespot_problem(double p);

}  // namespace dfh

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cellhom/homog.hpp"

namespace cellhom {

// Experiment description, persisted in a flat sectioned key-value format
// (diff-friendly; floats use shortest round-trip decimals).
struct ExperimentConfig {
    // [integrand]
    std::string integrand_id = "W";
    double p = 4.0;
    double r = 1.0;
    std::string phi = "sine";

    // [xi]
    std::string xi_mode = "list";  // list | grid | ray
    std::vector<Mat2> xi_list{Mat2{}};
    std::array<double, 4> grid_min{-0.4, -0.4, -0.4, -0.4};
    std::array<double, 4> grid_max{0.4, 0.4, 0.4, 0.4};
    std::array<int, 4> grid_count{3, 1, 1, 3};
    Mat2 ray_direction{0.0, 1.0, 0.0, 0.0};

    // [run]
    std::vector<int> k_list{1, 2, 4};
    std::map<int, int> n_for_k{{1, 8}, {2, 8}, {4, 6}};
    std::vector<double> t_list{0.5, 0.75, 0.875, 0.9375, 0.96875, 0.984375};
    std::vector<double> eps_list{1.0, 0.5, 0.25};
    std::vector<double> delta_t{0.5, 0.9, 0.99};
    int delta_samples = 400;
    std::string out = "results";
    std::uint64_t seed = 42;
    int jobs = 1;

    // [solver]
    SolverOptions solver;

    bool operator==(const ExperimentConfig& other) const;

    // The xi rows this config denotes (grid mode filters by the domain).
    std::vector<Mat2> resolve_xis() const;
    GridSchedule grid_schedule() const { return GridSchedule{n_for_k}; }
};

// Canonical serialization; save(load(s)) == s for canonical input.
std::string save_config(const ExperimentConfig& cfg);
void save_config_file(const ExperimentConfig& cfg, const std::string& path);

// Throws std::runtime_error with a line/field diagnostic on bad input.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

// Shortest round-trip decimal form of a double.
std::string format_double(double v);
double parse_double(const std::string& s);

}  // namespace cellhom

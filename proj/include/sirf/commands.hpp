#pragma once

#include <string>
#include <vector>

namespace sirf {

// Argument structs mirror the CLI flags one-to-one; the functions return
// the process exit code (0 throughout -- failures are exceptions that the
// main() translator maps to 2 for input errors and 3 for numeric ones).

struct AnalyzeArgs {
    std::string model;
    int grid = 4096;
    std::string out; // empty = stdout
};

struct SimulateArgs {
    std::string model;
    std::string init; // "I,R" or "S,I,R"
    double t_end = 200.0;
    double step = 1e-3;
    std::string integrator = "rk4"; // rk4 | rkf45
    int stride = 1;
    std::string out; // empty = stdout
};

struct BasinArgs {
    std::string model;
    int grid = 50;
    double t_end = 300.0;
    double step = 1e-3;
    int threads = 0; // 0 = hardware concurrency
    std::string out; // empty = stdout
};

struct PlotArgs {
    std::string report;             // analysis report JSON
    std::string basin;              // basin CSV
    std::vector<std::string> trajs; // one or more trajectory CSVs
    std::string out;                // SVG path, required
};

int cmd_analyze(const AnalyzeArgs& args);
int cmd_simulate(const SimulateArgs& args);
int cmd_basin(const BasinArgs& args);
int cmd_plot(const PlotArgs& args);

} // namespace sirf

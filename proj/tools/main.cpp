// Command-line front end: analyze a model, simulate trajectories, map
// basins of attraction, and render SVG plots.  See README.md for the file
// formats.  Exit codes: 0 ok, 2 input/validation error, 3 numeric failure.

#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "sirf/commands.hpp"
#include "sirf/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Equilibrium analysis and simulation of SIR models with a "
                 "recovery-dependent infection rate"};
    app.require_subcommand(1);

    sirf::AnalyzeArgs analyze_args;
    CLI::App* analyze = app.add_subcommand(
        "analyze", "Find and classify all equilibria; emit a JSON report");
    analyze->add_option("--model", analyze_args.model, "model spec JSON file")
        ->required();
    analyze->add_option("--grid", analyze_args.grid,
                        "crossing-scan grid points (default 4096)");
    analyze->add_option("--out", analyze_args.out,
                        "report path (default: stdout)");

    sirf::SimulateArgs sim_args;
    CLI::App* simulate = app.add_subcommand(
        "simulate", "Integrate one trajectory; emit a CSV");
    simulate->add_option("--model", sim_args.model, "model spec JSON file")
        ->required();
    simulate
        ->add_option("--init", sim_args.init,
                     "initial state \"I,R\" (2-D) or \"S,I,R\" (3-D)")
        ->required();
    simulate->add_option("--t-end", sim_args.t_end, "end time (default 200)");
    simulate->add_option("--step", sim_args.step,
                         "RK4 step / initial RKF45 step (default 1e-3)");
    simulate->add_option("--integrator", sim_args.integrator,
                         "rk4 (default) or rkf45");
    simulate->add_option("--stride", sim_args.stride,
                         "record every N-th step (default 1)");
    simulate->add_option("--out", sim_args.out, "CSV path (default: stdout)");

    sirf::BasinArgs basin_args;
    CLI::App* basin = app.add_subcommand(
        "basin", "Map basins of attraction on a lattice; emit a CSV");
    basin->add_option("--model", basin_args.model, "model spec JSON file")
        ->required();
    basin->add_option("--grid", basin_args.grid,
                      "lattice points per axis (default 50)");
    basin->add_option("--t-end", basin_args.t_end,
                      "integration horizon per cell (default 300)");
    basin->add_option("--step", basin_args.step, "RK4 step (default 1e-3)");
    basin->add_option("--threads", basin_args.threads,
                      "worker threads (default: all cores)");
    basin->add_option("--out", basin_args.out, "CSV path (default: stdout)");

    sirf::PlotArgs plot_args;
    CLI::App* plot = app.add_subcommand("plot", "Render an SVG figure");
    plot->add_option("--report", plot_args.report,
                     "analysis report JSON: f-vs-g overlay with markers");
    plot->add_option("--basin", plot_args.basin, "basin CSV: colored lattice");
    plot->add_option("--traj", plot_args.trajs,
                     "trajectory CSV (repeatable): phase-plane fan");
    plot->add_option("--out", plot_args.out, "SVG path")->required();

    try {
        app.parse(argc, argv);
        if (*analyze) return sirf::cmd_analyze(analyze_args);
        if (*simulate) return sirf::cmd_simulate(sim_args);
        if (*basin) return sirf::cmd_basin(basin_args);
        if (*plot) return sirf::cmd_plot(plot_args);
        return 2; // unreachable: a subcommand is required
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const sirf::SpecError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const sirf::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}

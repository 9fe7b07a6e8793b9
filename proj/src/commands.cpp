#include "sirf/commands.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sirf/analysis.hpp"
#include "sirf/errors.hpp"
#include "sirf/format.hpp"
#include "sirf/model_spec.hpp"
#include "sirf/plot.hpp"
#include "sirf/simulate.hpp"

namespace sirf {

namespace {

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SpecError("cannot open output file: " + path);
    out << content;
    if (!out) throw SpecError("failed writing output file: " + path);
}

std::vector<double> parse_init(const std::string& text) {
    std::vector<double> vals;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, ',')) {
        // tolerate surrounding spaces, e.g. "0.3, 0.2"
        std::size_t a = cur.find_first_not_of(" \t");
        std::size_t b = cur.find_last_not_of(" \t");
        if (a == std::string::npos) throw SpecError("bad --init value: " + text);
        cur = cur.substr(a, b - a + 1);
        try {
            std::size_t used = 0;
            vals.push_back(std::stod(cur, &used));
            if (used != cur.size()) throw std::invalid_argument(cur);
        } catch (const std::exception&) {
            throw SpecError("bad --init component: \"" + cur + "\"");
        }
    }
    if (vals.size() != 2 && vals.size() != 3) {
        throw SpecError("--init needs \"I,R\" or \"S,I,R\", got \"" + text + "\"");
    }
    return vals;
}

} // namespace

int cmd_analyze(const AnalyzeArgs& args) {
    LoadedModel lm = load_model_file(args.model);
    AnalyzeOptions opt;
    opt.grid_points = args.grid;
    Analysis a = analyze(lm.model, opt);
    nlohmann::ordered_json report = analysis_report(a, lm.model);
    if (lm.redim) {
        nlohmann::ordered_json rd{{"mu", lm.raw->mu},
                                  {"gamma", lm.raw->gamma},
                                  {"k", lm.redim->k}};
        report["redimensionalization"] = rd;
    }
    write_output(args.out, report.dump(2) + "\n");
    if (!args.out.empty()) {
        std::cerr << "wrote " << args.out << " (" << a.endemic.size()
                  << " endemic equilibria, disease-free "
                  << to_string(a.disease_free.classification) << ")\n";
    }
    return 0;
}

int cmd_simulate(const SimulateArgs& args) {
    LoadedModel lm = load_model_file(args.model);
    std::vector<double> init = parse_init(args.init);

    IntegrateOptions opt;
    if (args.integrator == "rk4") {
        opt.method = Integrator::Rk4;
    } else if (args.integrator == "rkf45") {
        opt.method = Integrator::Rkf45;
    } else {
        throw SpecError("--integrator must be rk4 or rkf45, got \"" +
                        args.integrator + "\"");
    }
    opt.step = args.step;
    opt.stride = args.stride;

    std::ostringstream csv;
    TerminalStatus status;
    if (init.size() == 2) {
        auto traj = integrate(lm.model, State2{init[0], init[1]}, args.t_end, opt);
        write_trajectory_csv(csv, traj);
        status = traj.status;
    } else {
        auto traj = integrate(lm.model, State3{init[0], init[1], init[2]},
                              args.t_end, opt);
        write_trajectory_csv(csv, traj);
        status = traj.status;
    }

    if (status.code == TerminalStatus::Code::Failed) {
        // keep whatever was integrated on disk, then fail loudly
        write_output(args.out, csv.str());
        throw NumericError("integration failed: " + status.message);
    }
    write_output(args.out, csv.str());
    if (!args.out.empty()) std::cerr << "wrote " << args.out << "\n";
    return 0;
}

int cmd_basin(const BasinArgs& args) {
    LoadedModel lm = load_model_file(args.model);
    Analysis a = analyze(lm.model);

    BasinOptions opt;
    opt.step = args.step;
    opt.threads = args.threads;
    BasinMap map = basin_map(lm.model, all_equilibria(a), args.grid, args.t_end, opt);

    std::ostringstream csv;
    write_basin_csv(csv, map);
    write_output(args.out, csv.str());

    std::size_t resolved = 0;
    for (const BasinCell& c : map.cells) resolved += c.outcome >= 0;
    std::cerr << "basin map: " << resolved << "/" << map.cells.size()
              << " cells resolved\n";
    return 0;
}

int cmd_plot(const PlotArgs& args) {
    int inputs = (!args.report.empty()) + (!args.basin.empty()) +
                 (!args.trajs.empty());
    if (inputs != 1) {
        throw SpecError("plot needs exactly one of --report, --basin, --traj");
    }
    if (args.out.empty()) throw SpecError("plot needs --out");

    std::string svg;
    if (!args.report.empty()) {
        std::ifstream in(args.report);
        if (!in) throw SpecError("cannot open report: " + args.report);
        nlohmann::ordered_json report;
        try {
            report = nlohmann::ordered_json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw SpecError("report " + args.report + " is not valid JSON: " +
                            e.what());
        }
        svg = plot_report_svg(report);
    } else if (!args.basin.empty()) {
        std::ifstream in(args.basin);
        if (!in) throw SpecError("cannot open basin CSV: " + args.basin);
        svg = plot_basin_svg(read_basin_csv(in));
    } else {
        std::vector<Trajectory<State2>> trajs;
        for (const std::string& path : args.trajs) {
            std::ifstream in(path);
            if (!in) throw SpecError("cannot open trajectory CSV: " + path);
            trajs.push_back(read_trajectory_csv(in));
        }
        svg = plot_trajectories_svg(trajs);
    }
    write_output(args.out, svg);
    std::cerr << "wrote " << args.out << "\n";
    return 0;
}

} // namespace sirf

#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <ostream>

#include "dfh/adaptivity.hpp"
#include "dfh/config.hpp"
#include "dfh/snapshot.hpp"
#include "dfh/vtk.hpp"

namespace fs = std::filesystem;

namespace dfh::cli {

namespace {

std::string numbered(const std::string& stem, int iter, const char* ext) {
    std::ostringstream s;
    s << stem << '_' << std::setw(4) << std::setfill('0') << iter << ext;
    return s.str();
}

}  // namespace

int cmd_run(const std::string& config_path, std::ostream& out, std::ostream& err) {
    try {
        std::vector<std::string> notices;
        const ExperimentConfig cfg = load_config(config_path, &notices);
        for (const auto& n : notices) err << "note: " << n << '\n';
        const ProblemData data = make_problem(cfg);
        const Mesh mesh = make_initial_mesh(cfg);

        const fs::path dir(cfg.output_dir);
        fs::create_directories(dir);

        AdaptiveOptions opts;
        opts.n_iterations = cfg.n_iterations;
        opts.picard.tol = cfg.picard_tol;
        opts.picard.max_iter = cfg.picard_max_iter;
        opts.picard.relative = cfg.picard_relative;

        const auto start = std::chrono::steady_clock::now();
        auto observer = [&](int iter, const Mesh& m, const CoupledState& st, const IndicatorField& ind) {
            out << "round " << iter << ": nv=" << m.num_vertices() << " nt=" << m.num_elements()
                << " est=" << std::setprecision(6) << ind.total_global << " picard=" << st.picard_iters << '\n';
            const bool last = iter == cfg.n_iterations;
            const bool periodic = cfg.snapshot_every > 0 && iter % cfg.snapshot_every == 0;
            if (!last && !periodic) return;
            const Snapshot snap = make_snapshot(iter, cfg.p, m, st, ind.heat_local, ind.darcy_local);
            write_snapshot_file((dir / numbered("snapshot", iter, ".txt")).string(), snap);
            if (cfg.export_vtk) write_vtk_file((dir / numbered("solution", iter, ".vtk")).string(), m, snap.vtk_fields());
        };
        AdaptiveResult res = adaptive_loop(mesh, data, opts, observer);
        for (const auto& n : res.record.notices) err << "note: " << n << '\n';
        if (cfg.export_csv) write_csv_file((dir / "record.csv").string(), res.record);
        {
            std::ofstream cfg_out(dir / "config.used");
            cfg_out << serialize_config(cfg);
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out << "done: " << res.record.rows.size() << " rounds in " << std::setprecision(3) << secs << " s, output in "
            << dir.string() << '\n';
        return 0;
    } catch (const std::exception& e) {
        err << "dfh run: " << e.what() << '\n';
        return 1;
    }
}

int cmd_rates(const std::string& csv_path, int tail, std::ostream& out, std::ostream& err) {
    try {
        const RunRecord rec = read_csv_file(csv_path);
        const double slope = fit_rate(rec, tail);
        out << std::setprecision(6) << "slope " << slope << " over last " << tail << " rows\n";
        return 0;
    } catch (const std::exception& e) {
        err << "dfh rates: " << e.what() << '\n';
        return 1;
    }
}

int cmd_export(const std::string& snapshot_path, const std::string& vtk_path, std::ostream& out, std::ostream& err) {
    try {
        const Snapshot s = read_snapshot_file(snapshot_path);
        write_vtk_file(vtk_path, s.mesh, s.vtk_fields());
        out << "wrote " << vtk_path << '\n';
        return 0;
    } catch (const std::exception& e) {
        err << "dfh export: " << e.what() << '\n';
        return 1;
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Adaptive Darcy-Forchheimer / heat solver", "dfh"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "Run an adaptive experiment from a config file");
    run->add_option("config", config_path, "Config file")->required();

    std::string csv_path;
    int tail = 10;
    auto* rates = app.add_subcommand("rates", "Fit the estimator decay rate of a run record");
    rates->add_option("csv", csv_path, "record.csv")->required();
    rates->add_option("--tail", tail, "Number of trailing rows to fit")->check(CLI::PositiveNumber);

    std::string snapshot_path, vtk_path;
    auto* exp = app.add_subcommand("export", "Convert a snapshot to legacy VTK");
    exp->add_option("snapshot", snapshot_path, "Snapshot file")->required();
    exp->add_option("out", vtk_path, "Output .vtk path")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "dfh: " << e.what() << '\n';
        if (e.get_exit_code() != 0) err << app.help();
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    if (*run) return cmd_run(config_path, out, err);
    if (*rates) return cmd_rates(csv_path, tail, out, err);
    return cmd_export(snapshot_path, vtk_path, out, err);
}

}  // namespace dfh::cli

// tubeflow: command-line front end for the virtual tube toolkit.
//
// Subcommands: dof, simulate, render, validate, field. Every file-writing
// command honors --out and the TUBEFLOW_OUT environment variable (the latter
// wins when both are present). CSV output is byte-stable across runs except
// for the leading timestamp comment, which --no-timestamp removes.

#include <cctype>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "tubeflow/canonical.hpp"
#include "tubeflow/dof.hpp"
#include "tubeflow/svg.hpp"
#include "tubeflow/swarm.hpp"
#include "tubeflow/tube_io.hpp"
#include "tubeflow/verify.hpp"

namespace fs = std::filesystem;
using namespace tubeflow;

namespace {

fs::path resolve_out_dir(const std::string& flag_value) {
    const char* env = std::getenv("TUBEFLOW_OUT");
    fs::path dir = (env && *env) ? fs::path(env) : fs::path(flag_value);
    fs::create_directories(dir);
    return dir;
}

std::string timestamp_line() {
    std::time_t now = std::time(nullptr);
    char buf[64];
    std::strftime(buf, sizeof buf, "# generated %Y-%m-%dT%H:%M:%SZ\n",
                  std::gmtime(&now));
    return buf;
}

void write_file(const fs::path& file, const std::string& content) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + file.string());
    std::cout << "wrote " << file.string() << "\n";
}

// File stem for outputs: path inputs keep their stem, canonical letters keep
// the letter. Anything unsafe becomes '_'.
std::string sanitize(const std::string& name) {
    std::string out;
    for (char c : name)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.')
                   ? c : '_';
    return out.empty() ? std::string("tube") : out;
}

std::string stem_of(const std::string& ref) {
    if (is_canonical_name(ref)) {
        std::string s = ref;
        s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
        return s;
    }
    return sanitize(fs::path(ref).stem().string());
}

struct CsvWriter {
    explicit CsvWriter(bool with_timestamp) {
        if (with_timestamp) body << timestamp_line();
    }
    template <typename T> CsvWriter& operator<<(const T& v) {
        body << v;
        return *this;
    }
    CsvWriter& operator<<(double v) {
        body << format_number(v);
        return *this;
    }
    std::ostringstream body;
};

// ---------------------------------------------------------------- dof

struct DofArgs {
    std::string tube_ref;
    int n_s = QuadratureSpec{}.n_s;
    int n_lambda = QuadratureSpec{}.n_lambda;
    std::string out_dir = ".";
    bool no_timestamp = false;
    bool no_check = false;
};

int run_dof(const DofArgs& args) {
    VirtualTube tube = resolve_tube_ref(args.tube_ref);
    QuadratureSpec quad{args.n_s, args.n_lambda};
    DofReport report = compute_dof(tube, FlowParams{}, quad, !args.no_check);

    std::cout << "tube " << report.tube_name << ": energy " << format_number(report.energy)
              << " J, average width " << format_number(report.average_width)
              << " m, dof " << format_number(report.dof) << " m/J\n";

    fs::path dir = resolve_out_dir(args.out_dir);
    std::string stem = stem_of(args.tube_ref);
    write_file(dir / (stem + "_dof.json"), dof_report_to_json(report));
    std::string csv = dof_report_to_csv(report);
    if (!args.no_timestamp) csv.insert(0, timestamp_line());
    write_file(dir / (stem + "_dof.csv"), csv);
    return 0;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    std::string scenario_path;
    std::optional<int> trials;
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
    bool no_timestamp = false;
};

int run_simulate(const SimulateArgs& args) {
    ScenarioFile scenario = load_scenario(args.scenario_path);
    if (args.trials) scenario.options.trials = *args.trials;
    if (args.seed) scenario.options.seed = *args.seed;
    scenario.options.keep_trials = true;

    CampaignResult result = run_campaign(scenario.tubes, scenario.options);
    fs::path dir = resolve_out_dir(args.out_dir);

    CsvWriter campaign(!args.no_timestamp);
    campaign << "tube,dof_m_per_j,mean_crossing_time_s,stdev_crossing_time_s\n";
    for (const TubeSummary& tube : result.tubes) {
        campaign << tube.tube_name << ',' << tube.dof << ',' << tube.mean_crossing_time
                 << ',' << tube.stdev_crossing_time << '\n';
        std::cout << "tube " << tube.tube_name << ": dof " << format_number(tube.dof)
                  << ", mean crossing " << format_number(tube.mean_crossing_time)
                  << " s (std " << format_number(tube.stdev_crossing_time) << "), timeouts "
                  << tube.timed_out_total << ", containment violations "
                  << tube.containment_violations_total << ", safety breaches "
                  << tube.safety_breaches_total << "\n";
    }
    if (result.spearman_dof_time)
        std::cout << "spearman(dof, crossing time) = "
                  << format_number(*result.spearman_dof_time) << "\n";
    write_file(dir / "campaign.csv", campaign.body.str());

    for (const TubeSummary& tube : result.tubes) {
        std::string stem = sanitize(tube.tube_name);
        for (std::size_t k = 0; k < tube.trials.size(); ++k) {
            const TrialResult& trial = tube.trials[k];
            CsvWriter csv(!args.no_timestamp);
            csv << "robot,crossing_time_s\n";
            for (const Robot& robot : trial.robots)
                if (robot.crossed_finish_at)
                    csv << robot.id << ','
                        << (*robot.crossed_finish_at - *robot.crossed_start_at) << '\n';
            write_file(dir / ("trial_" + stem + "_" + std::to_string(k) + ".csv"),
                       csv.body.str());
            if (!trial.trajectories.empty()) {
                CsvWriter traj(!args.no_timestamp);
                traj << "robot,t,x,y,v_max\n";
                for (std::size_t i = 0; i < trial.trajectories.size(); ++i)
                    for (std::size_t j = 0; j < trial.trajectories[i].size(); ++j)
                        traj << trial.robots[i].id << ','
                             << static_cast<double>(j) * scenario.options.dt << ','
                             << trial.trajectories[i][j].x << ','
                             << trial.trajectories[i][j].y << ','
                             << trial.robots[i].v_max << '\n';
                write_file(dir / ("traj_" + stem + "_" + std::to_string(k) + ".csv"),
                           traj.body.str());
            }
        }
    }
    return 0;
}

// ---------------------------------------------------------------- render

struct RenderArgs {
    std::string tube_ref;
    bool field = false;
    std::string trajectories_csv;
    std::string out_dir = ".";
};

std::vector<TrajectoryTrace> read_trajectory_csv(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    std::map<int, TrajectoryTrace> by_robot;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#' || line.rfind("robot", 0) == 0) continue;
        std::istringstream row(line);
        std::string cell;
        double v[5];
        for (int i = 0; i < 5; ++i) {
            if (!std::getline(row, cell, ',')) cell.clear();
            try {
                v[i] = std::stod(cell);
            } catch (const std::exception&) {
                throw std::runtime_error(file.string() + ":" + std::to_string(line_no) +
                                         ": expected robot,t,x,y,v_max");
            }
        }
        TrajectoryTrace& trace = by_robot[static_cast<int>(v[0])];
        trace.robot_id = static_cast<int>(v[0]);
        trace.v_max = v[4];
        trace.points.push_back({v[2], v[3]});
    }
    std::vector<TrajectoryTrace> traces;
    traces.reserve(by_robot.size());
    for (auto& [id, trace] : by_robot) traces.push_back(std::move(trace));
    return traces;
}

int run_render(const RenderArgs& args) {
    VirtualTube tube = resolve_tube_ref(args.tube_ref);
    fs::path dir = resolve_out_dir(args.out_dir);
    std::string stem = stem_of(args.tube_ref);
    if (args.field) {
        write_file(dir / (stem + "_field.svg"), render_field_svg(tube));
    } else if (!args.trajectories_csv.empty()) {
        auto traces = read_trajectory_csv(args.trajectories_csv);
        write_file(dir / (stem + "_trajectories.svg"),
                   render_trajectories_svg(tube, traces));
    } else {
        write_file(dir / (stem + ".svg"), render_tube_svg(tube));
    }
    return 0;
}

// ---------------------------------------------------------------- field

struct FieldArgs {
    std::string tube_ref;
    int n_s = 101;
    int n_lambda = 5;
    std::string out_dir = ".";
    bool no_timestamp = false;
};

int run_field(const FieldArgs& args) {
    if (args.n_s < 2 || args.n_lambda < 2)
        throw std::runtime_error("field: --ns and --nlambda must be >= 2");
    VirtualTube tube = resolve_tube_ref(args.tube_ref);
    double s0 = tube.curve().s_begin();
    double s1 = tube.curve().s_end();
    std::vector<double> s_grid(args.n_s), lambda_grid(args.n_lambda);
    for (int i = 0; i < args.n_s; ++i)
        s_grid[i] = s0 + (s1 - s0) * static_cast<double>(i) / (args.n_s - 1);
    for (int j = 0; j < args.n_lambda; ++j)
        lambda_grid[j] = static_cast<double>(j) / (args.n_lambda - 1);

    CsvWriter csv(!args.no_timestamp);
    csv << "s,theta,lambda_init,x,y,vx,vy,density\n";
    for (const FieldSample& sample : sample_flow_field(tube, FlowParams{}, s_grid, lambda_grid)) {
        csv << sample.state.s << ','
            << (sample.id.side == Side::upper ? 0.0 : std::numbers::pi) << ','
            << sample.id.lambda_init << ',' << sample.state.position.x << ','
            << sample.state.position.y << ',' << sample.state.velocity.x << ','
            << sample.state.velocity.y << ',' << sample.state.density << '\n';
    }
    fs::path dir = resolve_out_dir(args.out_dir);
    write_file(dir / (stem_of(args.tube_ref) + "_field.csv"), csv.body.str());
    return 0;
}

// ---------------------------------------------------------------- validate

struct ValidateArgs {
    int random_tubes = 200;
    int trapezoids = 100000;
    std::string out_dir = ".";
};

int run_validate(const ValidateArgs& args) {
    ValidationOptions options;
    options.random_tubes = args.random_tubes;
    options.random_trapezoids = args.trapezoids;
    ValidationReport report = run_validation(canonical_tubes(), options);

    for (const ValidationCheck& check : report.checks)
        std::cout << (check.passed ? "[PASS] " : "[FAIL] ") << check.name << ": "
                  << check.detail << "\n";
    std::cout << (report.all_passed ? "all checks passed" : "CHECKS FAILED")
              << " (seed " << report.seed << ")\n";

    std::string json = "{\n  \"all_passed\": ";
    json += report.all_passed ? "true" : "false";
    json += ",\n  \"seed\": " + std::to_string(report.seed) + ",\n  \"checks\": [\n";
    for (std::size_t i = 0; i < report.checks.size(); ++i) {
        const ValidationCheck& check = report.checks[i];
        std::string detail;
        for (char c : check.detail) {
            if (c == '"' || c == '\\') detail += '\\';
            detail += c;
        }
        json += "    {\"name\": \"" + check.name + "\", \"passed\": " +
                (check.passed ? "true" : "false") + ", \"detail\": \"" + detail + "\"}";
        json += (i + 1 < report.checks.size()) ? ",\n" : "\n";
    }
    json += "  ]\n}\n";
    write_file(resolve_out_dir(args.out_dir) / "validate.json", json);
    return report.all_passed ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"virtual tube transport: energy, flowability and swarm crossing"};
    app.require_subcommand(1);

    DofArgs dof_args;
    CLI::App* dof_cmd = app.add_subcommand(
        "dof", "compute transport energy, average width and their ratio");
    dof_cmd->add_option("tube", dof_args.tube_ref, "tube JSON file or canonical letter A-E")
        ->required();
    dof_cmd->add_option("--ns", dof_args.n_s, "trapezoid steps along the curve")
        ->check(CLI::Range(2, 10000000));
    dof_cmd->add_option("--nlambda", dof_args.n_lambda, "mass buckets per side")
        ->check(CLI::Range(1, 1000000));
    dof_cmd->add_option("--out", dof_args.out_dir, "output directory");
    dof_cmd->add_flag("--no-timestamp", dof_args.no_timestamp,
                      "omit the timestamp comment from CSV output");
    dof_cmd->add_flag("--no-check", dof_args.no_check,
                      "skip the grid-doubling convergence check");

    SimulateArgs sim_args;
    CLI::App* sim_cmd = app.add_subcommand(
        "simulate", "run swarm crossing trials from a scenario file");
    sim_cmd->add_option("scenario", sim_args.scenario_path, "scenario JSON file")
        ->required()->check(CLI::ExistingFile);
    sim_cmd->add_option("--trials", sim_args.trials, "override trials per tube")
        ->check(CLI::Range(1, 100000));
    sim_cmd->add_option("--seed", sim_args.seed, "override base seed");
    sim_cmd->add_option("--out", sim_args.out_dir, "output directory");
    sim_cmd->add_flag("--no-timestamp", sim_args.no_timestamp,
                      "omit the timestamp comment from CSV output");

    RenderArgs render_args;
    CLI::App* render_cmd = app.add_subcommand("render", "write an SVG figure of a tube");
    render_cmd->add_option("tube", render_args.tube_ref, "tube JSON file or canonical letter A-E")
        ->required();
    CLI::Option* field_flag =
        render_cmd->add_flag("--field", render_args.field, "overlay element velocity arrows");
    render_cmd->add_option("--trajectories", render_args.trajectories_csv,
                   "overlay robot paths from a trajectory CSV (robot,t,x,y,v_max)")
        ->check(CLI::ExistingFile)->excludes(field_flag);
    render_cmd->add_option("--out", render_args.out_dir, "output directory");

    FieldArgs field_args;
    CLI::App* field_cmd = app.add_subcommand("field", "export flow field samples as CSV");
    field_cmd->add_option("tube", field_args.tube_ref, "tube JSON file or canonical letter A-E")
        ->required();
    field_cmd->add_option("--ns", field_args.n_s, "samples along the curve")
        ->check(CLI::Range(2, 1000000));
    field_cmd->add_option("--nlambda", field_args.n_lambda, "samples across each side")
        ->check(CLI::Range(2, 100000));
    field_cmd->add_option("--out", field_args.out_dir, "output directory");
    field_cmd->add_flag("--no-timestamp", field_args.no_timestamp,
                        "omit the timestamp comment from CSV output");

    ValidateArgs validate_args;
    CLI::App* validate_cmd = app.add_subcommand(
        "validate", "run the oracle suite on the built-in tubes");
    validate_cmd->add_option("--random", validate_args.random_tubes,
                             "number of random tubes to check")
        ->check(CLI::Range(0, 1000000));
    validate_cmd->add_option("--trapezoids", validate_args.trapezoids,
                             "number of random trapezoid swaps to check")
        ->check(CLI::Range(0, 100000000));
    validate_cmd->add_option("--out", validate_args.out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*dof_cmd) return run_dof(dof_args);
        if (*sim_cmd) return run_simulate(sim_args);
        if (*render_cmd) return run_render(render_args);
        if (*field_cmd) return run_field(field_args);
        if (*validate_cmd) return run_validate(validate_args);
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

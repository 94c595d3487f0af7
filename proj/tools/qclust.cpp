// Command-line front end: ingest, build, solve, evaluate, benchmark, fixture.
// Exit codes: 0 success (feasible), 1 error, 2 solved but infeasible.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "qclust/qclust.hpp"

namespace fs = std::filesystem;
using namespace qclust;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

struct InputArgs {
    std::string path;
    std::string layout = "row";
    bool header = false;
    std::size_t samples_per_hour = 1;
    std::size_t head = 0;  // 0: all profiles
};

struct ModelArgs {
    std::string variant = "kernel";
    double sigma = 0.5;
    std::string exponent = "linear";
    std::string centering = "standard";
    std::string normalization = "auto";
    std::string lambda_policy = "tenfold-max";
    double lambda = 0.0;
};

struct SolverArgs {
    std::string solver = "anneal";
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    std::size_t max_vars = 24;
    bool trajectory = false;
    SolverConfig config;
};

void add_input(CLI::App* app, InputArgs& a, bool required = true) {
    auto* opt = app->add_option("-i,--input", a.path, "profile table (CSV)")->check(CLI::ExistingFile);
    if (required) opt->required();
    app->add_option("--layout", a.layout, "row: one profile per row; column: one profile per column")
        ->check(CLI::IsMember({"row", "column"}));
    app->add_flag("--header", a.header, "first line is a header");
    app->add_option("--samples-per-hour", a.samples_per_hour, "average this many samples into one hourly value")
        ->check(CLI::PositiveNumber);
    app->add_option("--head", a.head, "use only the first N profiles");
}

void add_model(CLI::App* app, ModelArgs& m) {
    app->add_option("--variant", m.variant)->check(CLI::IsMember({"kernel", "distance"}));
    app->add_option("--sigma", m.sigma, "kernel bandwidth")->check(CLI::PositiveNumber);
    app->add_option("--exponent", m.exponent, "kernel exponent on the distance")
        ->check(CLI::IsMember({"linear", "squared"}));
    app->add_option("--centering", m.centering)->check(CLI::IsMember({"standard", "subtract-grand"}));
    app->add_option("--normalization", m.normalization)->check(CLI::IsMember({"auto", "none", "minmax", "maxabs"}));
    app->add_option("--lambda-policy", m.lambda_policy)
        ->check(CLI::IsMember({"tenfold-max", "distance-bound", "explicit"}));
    app->add_option("--lambda", m.lambda, "penalty weight for the explicit policy");
}

void add_solver(CLI::App* app, SolverArgs& s, bool with_kind = true) {
    if (with_kind) {
        app->add_option("--solver", s.solver)
            ->check(CLI::IsMember({"brute-force", "anneal", "sim-cim", "kmeans", "kmedoids"}));
    }
    app->add_option("--seed", s.seed, "root seed");
    app->add_option("--threads", s.threads, "workers for independent restarts")->check(CLI::PositiveNumber);
    app->add_option("--max-vars", s.max_vars, "brute-force variable cap");
    app->add_flag("--trajectory", s.trajectory, "record best-energy trajectory");
    auto& c = s.config;
    app->add_option("--sweeps", c.anneal.sweeps);
    app->add_option("--anneal-restarts", c.anneal.restarts);
    app->add_option("--t-start", c.anneal.t_start, "0: max |Q|");
    app->add_option("--t-end", c.anneal.t_end, "0: end ratio times t-start");
    app->add_option("--cim-steps", c.cim.steps);
    app->add_option("--cim-restarts", c.cim.restarts);
    app->add_option("--cim-dt", c.cim.dt);
    app->add_option("--pump-start", c.cim.pump_start);
    app->add_option("--pump-end", c.cim.pump_end);
    app->add_option("--coupling-min", c.cim.coupling_min);
    app->add_option("--coupling-max", c.cim.coupling_max);
    app->add_option("--amplitude-clamp", c.cim.amplitude_clamp);
    app->add_option("--baseline-iterations", c.baseline.max_iterations);
    app->add_option("--baseline-restarts", c.baseline.restarts);
}

SolverConfig solver_config(const SolverArgs& s) {
    SolverConfig c = s.config;
    c.kind = solver_kind_from_string(s.solver);
    c.seed = s.seed;
    c.threads = s.threads;
    c.brute_force_max_vars = s.max_vars;
    c.record_trajectory = s.trajectory;
    return c;
}

ModelOptions model_options(const ModelArgs& m) {
    ModelOptions o;
    o.variant = variant_from_string(m.variant);
    o.sigma = m.sigma;
    o.exponent = exponent_from_string(m.exponent);
    o.centering = centering_from_string(m.centering);
    o.normalization = normalization_from_string(m.normalization);
    o.lambda_policy = lambda_policy_from_string(m.lambda_policy);
    o.lambda = m.lambda;
    return o;
}

ProfileSet load_input(const InputArgs& a) {
    LoadOptions lo;
    lo.layout = a.layout == "column" ? Layout::ColumnMajor : Layout::RowMajor;
    lo.has_header = a.header;
    ProfileSet p = load_profiles_file(a.path, lo);
    if (a.samples_per_hour > 1) p = hourly_average(p, a.samples_per_hour);
    return a.head ? p.head(a.head) : p;
}

std::ofstream open_output(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
    return out;
}

void write_json(const std::string& path, const Json& j) {
    if (path.empty() || path == "-") {
        std::cout << j.dump(2) << '\n';
        return;
    }
    auto out = open_output(path);
    out << j.dump(2) << '\n';
}

Json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoError, "cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::ParseError, path + ": " + e.what());
    }
}

QuboModel read_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoError, "cannot open " + path);
    return read_qubo(in);
}

std::vector<double> parse_sigmas(const std::string& text) {
    std::vector<double> out;
    std::stringstream s(text);
    std::string item;
    while (std::getline(s, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            const double v = std::stod(item, &used);
            if (used != item.size() || !(v > 0.0)) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            fail(ErrorCode::ConfigError, "bad sigma '" + item + "'");
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Clustering as QUBO: build, solve and score one-hot clustering models"};
    app.set_config("--config", "", "TOML config file; flags override it");
    app.require_subcommand(1);

    // fixture
    auto* fixture = app.add_subcommand("fixture", "write a seeded synthetic dataset");
    std::string fixture_kind = "pv";
    std::uint64_t fixture_seed = 7;
    std::string fixture_out;
    fixture->add_option("--kind", fixture_kind)->check(CLI::IsMember({"pv", "rings"}));
    fixture->add_option("--seed", fixture_seed);
    fixture->add_option("-o,--out", fixture_out)->required();

    // ingest
    auto* ingest = app.add_subcommand("ingest", "validate and hourly-average a profile table");
    InputArgs ingest_in;
    std::string ingest_out, ingest_distances;
    add_input(ingest, ingest_in);
    ingest->add_option("-o,--out", ingest_out, "cleaned profile CSV")->required();
    ingest->add_option("--distances", ingest_distances, "also write the distance matrix CSV");

    // build
    auto* build = app.add_subcommand("build", "write the clustering QUBO and its manifest");
    InputArgs build_in;
    ModelArgs build_model_args;
    std::size_t build_groups = 2;
    std::string build_dir;
    add_input(build, build_in);
    add_model(build, build_model_args);
    build->add_option("-g,--groups", build_groups)->check(CLI::PositiveNumber);
    build->add_option("-o,--out-dir", build_dir, "writes model.qubo and manifest.json")->required();

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "minimise a model and report the best assignment");
    std::string solve_model, solve_manifest, solve_out;
    std::size_t solve_groups = 0;
    bool solve_no_timing = false;
    InputArgs solve_in;
    ModelArgs solve_model_args;
    SolverArgs solve_args;
    solve_cmd->add_option("-m,--model", solve_model, "model file from build")->check(CLI::ExistingFile);
    solve_cmd->add_option("--manifest", solve_manifest, "manifest (default: manifest.json beside the model)");
    solve_cmd->add_option("-g,--groups", solve_groups, "group count when no manifest is available");
    add_input(solve_cmd, solve_in, false);
    add_model(solve_cmd, solve_model_args);
    add_solver(solve_cmd, solve_args);
    solve_cmd->add_option("-o,--out", solve_out, "result JSON (default: stdout)");
    solve_cmd->add_flag("--no-timing", solve_no_timing, "omit wall time so reruns are byte-identical");

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "score a result against the profiles");
    InputArgs eval_in;
    std::string eval_model, eval_result, eval_out;
    std::size_t eval_groups = 0;
    std::optional<double> eval_oracle;
    add_input(eval_cmd, eval_in);
    eval_cmd->add_option("-m,--model", eval_model)->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("-r,--result", eval_result)->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("-g,--groups", eval_groups)->required()->check(CLI::PositiveNumber);
    eval_cmd->add_option("--oracle", eval_oracle, "reference energy for the optimality gap");
    eval_cmd->add_option("-o,--out", eval_out, "report JSON (default: stdout)");

    // benchmark
    auto* bench = app.add_subcommand("benchmark", "run case x sigma x solver grids into a CSV");
    InputArgs bench_in;
    ModelArgs bench_model_args;
    SolverArgs bench_args;
    std::string bench_cases = "50:2,60:3,70:4,80:5";
    std::string bench_solvers = "anneal,sim-cim,kmeans,kmedoids";
    std::string bench_sigmas, bench_out;
    add_input(bench, bench_in);
    add_model(bench, bench_model_args);
    add_solver(bench, bench_args, false);
    bench->add_option("--cases", bench_cases, "comma-separated N:G list, first N profiles");
    bench->add_option("--solvers", bench_solvers, "comma-separated solver names");
    bench->add_option("--sigmas", bench_sigmas, "comma-separated sigma sweep");
    bench->add_option("-o,--out", bench_out, "CSV path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitError;
    }

    try {
        if (*fixture) {
            auto out = open_output(fixture_out);
            if (fixture_kind == "pv") {
                write_profiles_csv(out, make_pv_fixture(fixture_seed));
            } else {
                write_profiles_csv(out, make_rings(fixture_seed).points);
            }
            return kExitOk;
        }

        if (*ingest) {
            const ProfileSet p = load_input(ingest_in);
            auto out = open_output(ingest_out);
            write_profiles_csv(out, p);
            if (!ingest_distances.empty()) {
                auto d = open_output(ingest_distances);
                write_matrix_csv(d, distance_matrix(p));
            }
            std::cerr << "profiles: " << p.size() << ", length: " << p.length() << '\n';
            return kExitOk;
        }

        if (*build) {
            const ProfileSet p = load_input(build_in);
            const BuiltModel b = build_model(p, build_groups, model_options(build_model_args));
            fs::create_directories(build_dir);
            auto out = open_output(fs::path(build_dir) / "model.qubo");
            write_qubo(out, b.model);
            Json manifest = manifest_json(b);
            manifest["input"] = build_in.path;
            write_json((fs::path(build_dir) / "manifest.json").string(), manifest);
            return kExitOk;
        }

        if (*solve_cmd) {
            const SolverConfig cfg = solver_config(solve_args);
            SolveResult result;
            std::size_t groups = solve_groups;
            std::size_t profiles = 0;
            if (!solve_model.empty()) {
                if (!is_qubo_solver(cfg.kind)) {
                    fail(ErrorCode::ConfigError, "baseline solvers need --input instead of --model");
                }
                const QuboModel model = read_model_file(solve_model);
                std::string manifest_path = solve_manifest;
                if (manifest_path.empty()) {
                    const fs::path sibling = fs::path(solve_model).parent_path() / "manifest.json";
                    if (fs::exists(sibling)) manifest_path = sibling.string();
                }
                if (!manifest_path.empty() && groups == 0) {
                    groups = read_json(manifest_path).at("n_groups").get<std::size_t>();
                }
                if (groups == 0) fail(ErrorCode::ConfigError, "group count unknown: pass --groups or --manifest");
                if (model.size() % groups != 0) {
                    fail(ErrorCode::DimensionMismatch, "model size is not a multiple of the group count");
                }
                profiles = model.size() / groups;
                result = solve(model, cfg);
            } else {
                if (solve_in.path.empty()) fail(ErrorCode::ConfigError, "solve needs --model or --input");
                if (groups == 0) fail(ErrorCode::ConfigError, "solve --input needs --groups");
                const ProfileSet p = load_input(solve_in);
                const BuiltModel b = build_model(p, groups, model_options(solve_model_args));
                profiles = b.n_profiles;
                result = run_solver(b, p, cfg);
            }
            const Decoded decoded = decode_assignment(result.bits, profiles, groups);
            Json j = result_json(result, !solve_no_timing);
            j["n_groups"] = groups;
            j["feasible"] = decoded.violations == 0;
            j["violations"] = decoded.violations;
            write_json(solve_out, j);
            return decoded.violations == 0 ? kExitOk : kExitInfeasible;
        }

        if (*eval_cmd) {
            const ProfileSet p = load_input(eval_in);
            const QuboModel model = read_model_file(eval_model);
            const SolveResult result = result_from_json(read_json(eval_result));
            const EvalReport report = evaluate(result.bits, distance_matrix(p), model, eval_groups, eval_oracle);
            write_json(eval_out, report_json(report));
            return report.feasible ? kExitOk : kExitInfeasible;
        }

        if (*bench) {
            const ProfileSet p = load_input(bench_in);
            BenchmarkOptions o;
            o.cases = parse_cases(bench_cases);
            std::stringstream names(bench_solvers);
            for (std::string name; std::getline(names, name, ',');) {
                if (!name.empty()) o.solvers.push_back(solver_kind_from_string(name));
            }
            o.sigmas = parse_sigmas(bench_sigmas);
            o.model = model_options(bench_model_args);
            o.solver = solver_config(bench_args);
            o.log = &std::cerr;
            const auto rows = run_benchmark(p, o);
            if (bench_out.empty() || bench_out == "-") {
                write_benchmark_csv(std::cout, rows);
            } else {
                auto out = open_output(bench_out);
                write_benchmark_csv(out, rows);
            }
            return kExitOk;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}

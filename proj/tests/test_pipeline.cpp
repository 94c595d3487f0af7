#include <fstream>
#include <sstream>

#include "catch2/catch_amalgamated.hpp"
#include "support.hpp"

using namespace qclust;
using Catch::Approx;
using support::code_of;

namespace {

const ProfileSet& pv80() {
    static const ProfileSet p = load_profiles_file(support::fixture_path("pv80.csv"));
    return p;
}

std::string strip_wall_time(const std::string& csv) {
    std::istringstream in(csv);
    std::string out, line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream s(line);
        for (std::string cell; std::getline(s, cell, ',');) cells.push_back(cell);
        if (cells.size() > 6) cells[6].clear();
        for (std::size_t k = 0; k < cells.size(); ++k) out += (k ? "," : "") + cells[k];
        out += '\n';
    }
    return out;
}

}  // namespace

TEST_CASE("build_model reproduces the benchmark case sizes") {
    const std::pair<std::size_t, std::size_t> cases[] = {{50, 2}, {60, 3}, {70, 4}, {80, 5}};
    const std::size_t expected[] = {100, 180, 280, 400};
    for (std::size_t k = 0; k < 4; ++k) {
        const auto [n, g] = cases[k];
        const BuiltModel b = build_model(pv80().head(n), g, ModelOptions{});
        CHECK(b.model.size() == expected[k]);
        CHECK(manifest_json(b)["n_vars"] == expected[k]);
    }
}

TEST_CASE("single group model assigns every profile to it") {
    const BuiltModel b = build_model(pv80().head(6), 1, ModelOptions{.variant = Variant::Distance});
    CHECK(b.model.size() == 6);
    const SolveResult r = brute_force_solve(b.model);
    CHECK(r.bits == BitVector(6, 1));
}

TEST_CASE("lambda policies") {
    const ProfileSet p = pv80().head(10);
    SECTION("tenfold-max") {
        for (auto variant : {Variant::Distance, Variant::Kernel}) {
            const BuiltModel b = build_model(p, 3, ModelOptions{.variant = variant});
            CHECK(b.lambda == Approx(10.0 * b.block.max_abs_element()).margin(1e-12));
            CHECK(b.model.offset() == Approx(10.0 * b.lambda).margin(1e-9));
        }
    }
    SECTION("distance-bound") {
        const BuiltModel b =
            build_model(p, 3, ModelOptions{.variant = Variant::Distance, .lambda_policy = LambdaPolicy::DistanceBound});
        CHECK(b.lambda == Approx(7.0 * b.block.max_element()).margin(1e-12));
        CHECK(code_of([&] {
                  build_model(p, 3, ModelOptions{.variant = Variant::Kernel, .lambda_policy = LambdaPolicy::DistanceBound});
              }) == ErrorCode::KindMismatch);
    }
    SECTION("explicit") {
        ModelOptions o{.variant = Variant::Distance, .lambda_policy = LambdaPolicy::Explicit, .lambda = 3.5};
        CHECK(build_model(p, 2, o).lambda == 3.5);
        o.lambda = 0.0;
        CHECK(code_of([&] { build_model(p, 2, o); }) == ErrorCode::NonPositiveLambda);
    }
    SECTION("manifest lambda satisfies its policy") {
        const BuiltModel b = build_model(p, 2, ModelOptions{});
        const Json m = manifest_json(b);
        CHECK(m["lambda"].get<double>() == Approx(10.0 * m["matrix"]["max_abs"].get<double>()));
        CHECK(m["lambda_policy"] == "tenfold-max");
    }
}

TEST_CASE("build_model rejects bad group counts") {
    CHECK(code_of([] { build_model(pv80().head(4), 0, ModelOptions{}); }) == ErrorCode::BadGroupCount);
    CHECK(code_of([] { build_model(pv80().head(4), 5, ModelOptions{}); }) == ErrorCode::GroupCountExceedsProfiles);
}

TEST_CASE("golden brute-force energy on the 12-variable fixture case") {
    std::ifstream in(support::fixture_path("golden_n12.json"));
    const Json golden = Json::parse(in);
    const BuiltModel b = build_model(pv80().head(6), 2, ModelOptions{.variant = Variant::Distance});
    const SolveResult r = brute_force_solve(b.model);
    CHECK(r.energy == Approx(golden["energy"].get<double>()).margin(1e-9));
    const Decoded d = decode_assignment(r.bits, 6, 2);
    std::vector<std::size_t> groups;
    for (auto g : d.assignment.labels) groups.push_back(g + 1);
    CHECK(same_partition(Assignment{groups, 3}, Assignment{golden["groups"].get<std::vector<std::size_t>>(), 3}));
}

TEST_CASE("result JSON") {
    SolveResult r;
    r.bits = {1, 0, 1};
    r.energy = -2.5;
    r.meta.solver = "anneal";
    r.meta.seed = 9;
    const Json j = result_json(r);
    CHECK(j["bits"] == "101");
    CHECK(j.contains("wall_time_seconds"));
    CHECK_FALSE(result_json(r, false).contains("wall_time_seconds"));
    const SolveResult back = result_from_json(j);
    CHECK(back.bits == r.bits);
    CHECK(back.energy == r.energy);
    CHECK(code_of([] { result_from_json(Json{{"bits", "10x"}, {"energy", 1.0}}); }) == ErrorCode::ParseError);
    CHECK(code_of([] { result_from_json(Json{{"energy", 1.0}}); }) == ErrorCode::ParseError);
}

TEST_CASE("parse_cases") {
    const auto cases = parse_cases("50:2, 60:3");
    REQUIRE(cases.size() == 2);
    CHECK(cases[1].n_profiles == 60);
    CHECK(cases[1].n_groups == 3);
    CHECK(parse_cases("").empty());
    CHECK(code_of([] { parse_cases("50-2"); }) == ErrorCode::ConfigError);
    CHECK(code_of([] { parse_cases("50:"); }) == ErrorCode::ConfigError);
}

TEST_CASE("benchmark") {
    SECTION("empty case list gives the header only") {
        std::ostringstream out;
        write_benchmark_csv(out, run_benchmark(pv80(), BenchmarkOptions{}));
        CHECK(out.str() == std::string(benchmark_header()) + "\n");
    }
    SECTION("rows for every solver, with oracle gaps on small cases") {
        BenchmarkOptions o;
        o.cases = parse_cases("6:2,12:2");
        o.solvers = {SolverKind::Anneal, SolverKind::KMedoids, SolverKind::BruteForce};
        const auto rows = run_benchmark(pv80(), o);
        REQUIRE(rows.size() == 6);
        CHECK(rows[0].gap_pct.has_value());
        CHECK(*rows[2].gap_pct == 0.0);
        CHECK(rows[3].ok);
        CHECK(rows[3].n_vars == 24);
        CHECK(rows[5].ok);  // the 24-variable case is still exhaustive
    }
    SECTION("failures are recorded and the run continues") {
        BenchmarkOptions o;
        o.cases = parse_cases("90:2,6:2");
        o.solvers = {SolverKind::Anneal};
        std::ostringstream log;
        o.log = &log;
        const auto rows = run_benchmark(pv80(), o);
        REQUIRE(rows.size() == 2);
        CHECK_FALSE(rows[0].ok);
        CHECK(format_row(rows[0]).find("error") != std::string::npos);
        CHECK(rows[1].ok);
        CHECK_FALSE(log.str().empty());
    }
    SECTION("identical seeds give identical tables") {
        BenchmarkOptions o;
        o.cases = parse_cases("20:2,30:3");
        o.solvers = {SolverKind::Anneal, SolverKind::SimCim, SolverKind::KMeans};
        o.solver.seed = 5;
        std::ostringstream a, b;
        write_benchmark_csv(a, run_benchmark(pv80(), o));
        o.solver.threads = 4;
        write_benchmark_csv(b, run_benchmark(pv80(), o));
        CHECK(strip_wall_time(a.str()) == strip_wall_time(b.str()));
    }
    SECTION("sigma sweep labels") {
        BenchmarkOptions o;
        o.cases = parse_cases("10:2");
        o.solvers = {SolverKind::Anneal};
        o.sigmas = {0.3, 1.0};
        const auto rows = run_benchmark(pv80(), o);
        REQUIRE(rows.size() == 2);
        CHECK(rows[0].label == "10:2/sigma=0.3");
        CHECK(rows[1].label == "10:2/sigma=1");
    }
}

TEST_CASE("option names round-trip") {
    CHECK(variant_from_string("distance") == Variant::Distance);
    CHECK(lambda_policy_from_string("distance-bound") == LambdaPolicy::DistanceBound);
    CHECK(normalization_from_string("maxabs") == Normalization::MaxAbs);
    CHECK(centering_from_string("subtract-grand") == Centering::SubtractGrand);
    CHECK(exponent_from_string("squared") == KernelExponent::Squared);
    CHECK(code_of([] { variant_from_string("linear"); }) == ErrorCode::ConfigError);
}

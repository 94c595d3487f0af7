// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "support.hpp"

using namespace qclust;

namespace {

int failures = 0;

void report(const char* id, bool pass, const std::string& detail) {
    std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    failures += pass ? 0 : 1;
}

std::string fmt(const char* pattern, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

SolverConfig config(SolverKind kind, std::uint64_t seed = 0) {
    SolverConfig c;
    c.kind = kind;
    c.seed = seed;
    c.threads = 4;
    return c;
}

const ProfileSet& pv80() {
    static const ProfileSet p = load_profiles_file(support::fixture_path("pv80.csv"));
    return p;
}

void conversions() {
    std::mt19937_64 rng(1001);
    std::uniform_int_distribution<std::size_t> size(1, 12);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = size(rng);
        const QuboModel q = support::random_qubo(rng, n);
        const IsingModel i = ising_from_qubo(q);
        const QuboModel back = qubo_from_ising(i);
        const oracle::Grid grid = support::to_grid(q.coefficients());
        for (std::uint64_t c = 0; c < (std::uint64_t{1} << n); ++c) {
            const std::vector<int> x = oracle::bits_of(c, n);
            const BitVector bits = support::to_bits(x);
            const double e = oracle::qubo_energy(grid, q.offset(), x);
            worst = std::max({worst, std::abs(ising_energy(i, spins_from_bits(bits)) - e),
                              std::abs(qubo_energy(back, bits) - e)});
        }
    }
    report("AC1", worst <= 1e-9, fmt("200 models, max energy error %.3g (tol 1e-9)", worst));
}

void penalty_feasibility() {
    std::mt19937_64 rng(1002);
    std::uniform_int_distribution<std::size_t> pick_n(3, 5), pick_g(2, 3);
    int instances = 0, infeasible = 0;
    while (instances < 100) {
        const std::size_t n = pick_n(rng), g = pick_g(rng);
        if (g >= n) continue;
        ++instances;
        const SimilarityMatrix d = distance_matrix(support::random_profiles(rng, n, 4));
        const QuboModel m = build_distance_qubo(d, g, Penalty::scalar(penalty_lower_bound(d, n, g)));
        const auto min = oracle::enumerate_qubo(support::to_grid(m.coefficients()), m.offset());
        for (const auto& x : min.minimisers) infeasible += decode_assignment(support::to_bits(x), n, g).violations != 0;
    }
    report("AC2", infeasible == 0, fmt("%d instances, %d infeasible global minimisers", instances, infeasible));
}

void encoding() {
    std::mt19937_64 rng(1003);
    std::uniform_int_distribution<std::size_t> pick_n(3, 6);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const ProfileSet p = support::random_profiles(rng, pick_n(rng), 24);
        const BuiltModel dist = build_model(p, 2, ModelOptions{.variant = Variant::Distance});
        const BuiltModel kern = build_model(p, 2, ModelOptions{.variant = Variant::Kernel});
        const double d_opt = oracle::best_distance_partition(support::to_grid(dist.block.values()), 2);
        const double k_opt = -oracle::best_similarity_partition(support::to_grid(kern.block.values()), 2);
        worst = std::max({worst, std::abs(brute_force_solve(dist.model).energy - d_opt),
                          std::abs(brute_force_solve(kern.model).energy - k_opt)});
    }
    report("AC3", worst <= 1e-9, fmt("100 instances x 2 variants, max |QUBO min - partition optimum| %.3g", worst));
}

void case_shapes() {
    const std::size_t expected[] = {100, 180, 280, 400};
    std::string sizes;
    bool ok = true;
    const auto cases = parse_cases("50:2,60:3,70:4,80:5");
    for (std::size_t k = 0; k < cases.size(); ++k) {
        const std::size_t n = build_model(pv80().head(cases[k].n_profiles), cases[k].n_groups, ModelOptions{}).model.size();
        ok = ok && n == expected[k];
        sizes += (k ? "/" : "") + std::to_string(n);
    }
    report("AC4", ok, "variable counts " + sizes + " (expected 100/180/280/400)");
}

void solver_quality() {
    std::mt19937_64 rng(1005);
    int sa = 0, cim = 0;
    const int instances = 50;
    for (int trial = 0; trial < instances; ++trial) {
        const QuboModel m = support::random_qubo(rng, 16);
        const double best = support::oracle_minimum(m);
        const auto seed = static_cast<std::uint64_t>(trial);
        sa += std::abs(solve(m, config(SolverKind::Anneal, seed)).energy - best) < 1e-9;
        cim += std::abs(solve(m, config(SolverKind::SimCim, seed)).energy - best) < 1e-9;
    }
    report("AC5", sa * 100 >= 95 * instances && cim * 100 >= 80 * instances,
           fmt("anneal %d/%d (need 95%%), sim-cim %d/%d (need 80%%)", sa, instances, cim, instances));
}

void trends() {
    BenchmarkOptions o;
    o.solvers = {SolverKind::Anneal};
    o.solver = config(SolverKind::Anneal, 0);

    o.cases = parse_cases("50:2,60:3,70:4,80:5");
    const auto rows = run_benchmark(pv80(), o);
    bool monotone = true;
    std::string values;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (k && rows[k].silhouette > rows[k - 1].silhouette + 0.05) monotone = false;
        values += fmt("%s%.3f", k ? " " : "", rows[k].silhouette);
    }
    report("AC6a", monotone, "silhouette over G=2..5: " + values + " (non-increasing within 0.05)");

    o.cases = parse_cases("80:5");
    o.sigmas = {0.1, 0.3, 0.5, 1.0, 2.0};
    const auto sweep = run_benchmark(pv80(), o);
    std::size_t arg = 0;
    values.clear();
    for (std::size_t k = 0; k < sweep.size(); ++k) {
        if (sweep[k].silhouette > sweep[arg].silhouette) arg = k;
        values += fmt("%s%.3f", k ? " " : "", sweep[k].silhouette);
    }
    report("AC6b", arg != 0 && arg + 1 != sweep.size(),
           "sigma 0.1/0.3/0.5/1/2 -> " + values + fmt(", argmax sigma=%g", o.sigmas[arg]));

    o.sigmas.clear();
    const double kernel = rows.back().silhouette;
    o.solvers = {SolverKind::KMedoids};
    const double pam = run_benchmark(pv80(), o).front().silhouette;
    report("AC6c", std::abs(kernel - pam) <= 0.1,
           fmt("80-profile case: kernel QUBO %.3f vs K-medoids %.3f, |diff| %.3f (tol 0.1)", kernel, pam,
               std::abs(kernel - pam)));
}

void silhouette_oracle() {
    Matrix d(4, 4);
    const double xs[] = {0, 1, 10, 11};
    for (Eigen::Index i = 0; i < 4; ++i)
        for (Eigen::Index j = 0; j < 4; ++j) d(i, j) = std::abs(xs[i] - xs[j]);
    const std::vector<std::size_t> labels{0, 0, 1, 1};
    const double got = silhouette(Assignment{labels, 2}, SimilarityMatrix(d, MatrixKind::Distance));
    const double want = oracle::silhouette(support::to_grid(d), labels);
    report("AC7", std::abs(got - want) <= 1e-12, fmt("%.17g vs reference %.17g", got, want));
}

std::string without_wall_time(const std::vector<BenchmarkRow>& rows) {
    std::ostringstream out;
    for (BenchmarkRow r : rows) {
        r.wall_time_s = 0.0;
        out << format_row(r) << '\n';
    }
    return out.str();
}

void determinism() {
    BenchmarkOptions o;
    o.cases = parse_cases("50:2,60:3,70:4,80:5");
    o.solvers = {SolverKind::Anneal, SolverKind::SimCim, SolverKind::KMeans, SolverKind::KMedoids};
    o.solver = config(SolverKind::Anneal, 42);
    const std::string first = without_wall_time(run_benchmark(pv80(), o));
    const std::string second = without_wall_time(run_benchmark(pv80(), o));
    report("AC8", first == second, fmt("two 16-row benchmark runs %s modulo wall time", first == second ? "identical" : "differ"));
}

void rings() {
    const int seeds = 10;
    int kernel = 0, kmeans = 0;
    for (std::uint64_t seed = 0; seed < seeds; ++seed) {
        const LabelledPoints data = make_rings(seed);
        const Assignment truth{data.truth, 2};
        ModelOptions o;
        o.sigma = 1.0;
        o.exponent = KernelExponent::Squared;
        const BuiltModel b = build_model(data.points, 2, o);
        const Decoded d = decode_assignment(solve(b.model, config(SolverKind::Anneal, seed)).bits, b.n_profiles, 2);
        kernel += d.violations == 0 && same_partition(d.assignment, truth);
        kmeans += same_partition(baseline_cluster(data.points, 2, config(SolverKind::KMeans, seed)), truth);
    }
    report("AC9", kernel * 10 >= 8 * seeds && (seeds - kmeans) * 10 >= 8 * seeds,
           fmt("rings recovered exactly: kernel QUBO %d/%d, K-means %d/%d (need kernel >= 80%%, K-means failing >= 80%%)",
               kernel, seeds, kmeans, seeds));
}

}  // namespace

int main() {
    const std::pair<const char*, void (*)()> checks[] = {
        {"AC1", conversions}, {"AC2", penalty_feasibility}, {"AC3", encoding},   {"AC4", case_shapes},
        {"AC5", solver_quality}, {"AC6", trends},         {"AC7", silhouette_oracle}, {"AC8", determinism},
        {"AC9", rings},
    };
    for (const auto& [id, check] : checks) {
        const auto start = std::chrono::steady_clock::now();
        try {
            check();
        } catch (const std::exception& e) {
            report(id, false, std::string("threw ") + e.what());
        }
        const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
        std::fprintf(stderr, "  %s took %.2f s\n", id, took.count());
    }
    std::printf("%d criteria failed\n", failures);
    return failures ? 1 : 0;
}

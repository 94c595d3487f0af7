#ifndef QCLUST_PIPELINE_HPP
#define QCLUST_PIPELINE_HPP

// End-to-end plumbing shared by the command-line tool and the acceptance
// suite: preprocessing options, model construction with a penalty policy,
// solver runs that also cover the clustering baselines, JSON documents and
// the benchmark table.

#include <charconv>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qclust/evaluation.hpp"
#include "qclust/profiles.hpp"
#include "qclust/qubo.hpp"
#include "qclust/solvers.hpp"

namespace qclust {

using Json = nlohmann::ordered_json;

enum class Variant { Distance, Kernel };
enum class Normalization { Auto, None, MinMax, MaxAbs };
enum class LambdaPolicy { TenfoldMax, DistanceBound, Explicit };

constexpr std::string_view to_string(Variant v) noexcept { return v == Variant::Distance ? "distance" : "kernel"; }

constexpr std::string_view to_string(Normalization n) noexcept {
    switch (n) {
        case Normalization::Auto: return "auto";
        case Normalization::None: return "none";
        case Normalization::MinMax: return "minmax";
        case Normalization::MaxAbs: return "maxabs";
    }
    return "unknown";
}

constexpr std::string_view to_string(LambdaPolicy p) noexcept {
    switch (p) {
        case LambdaPolicy::TenfoldMax: return "tenfold-max";
        case LambdaPolicy::DistanceBound: return "distance-bound";
        case LambdaPolicy::Explicit: return "explicit";
    }
    return "unknown";
}

constexpr std::string_view to_string(Centering c) noexcept { return c == Centering::SubtractGrand ? "subtract-grand" : "standard"; }
constexpr std::string_view to_string(KernelExponent e) noexcept {
    return e == KernelExponent::Linear ? "linear" : "squared";
}

namespace detail {

template <typename E, std::size_t K>
E enum_from_string(std::string_view name, const E (&options)[K], const char* what) {
    for (E e : options) {
        if (name == to_string(e)) return e;
    }
    fail(ErrorCode::ConfigError, std::string("unknown ") + what + " '" + std::string(name) + "'");
}

}  // namespace detail

inline Variant variant_from_string(std::string_view s) {
    static constexpr Variant all[] = {Variant::Distance, Variant::Kernel};
    return detail::enum_from_string(s, all, "variant");
}
inline Normalization normalization_from_string(std::string_view s) {
    static constexpr Normalization all[] = {Normalization::Auto, Normalization::None, Normalization::MinMax,
                                            Normalization::MaxAbs};
    return detail::enum_from_string(s, all, "normalization");
}
inline LambdaPolicy lambda_policy_from_string(std::string_view s) {
    static constexpr LambdaPolicy all[] = {LambdaPolicy::TenfoldMax, LambdaPolicy::DistanceBound,
                                           LambdaPolicy::Explicit};
    return detail::enum_from_string(s, all, "lambda policy");
}
inline Centering centering_from_string(std::string_view s) {
    static constexpr Centering all[] = {Centering::SubtractGrand, Centering::Standard};
    return detail::enum_from_string(s, all, "centering");
}
inline KernelExponent exponent_from_string(std::string_view s) {
    static constexpr KernelExponent all[] = {KernelExponent::Linear, KernelExponent::Squared};
    return detail::enum_from_string(s, all, "kernel exponent");
}

/// How a profile set becomes a QUBO. Auto normalisation means min-max for
/// distances and max-abs scaling for centered similarities.
struct ModelOptions {
    Variant variant = Variant::Kernel;
    double sigma = 0.5;
    KernelExponent exponent = KernelExponent::Linear;
    Centering centering = Centering::Standard;
    Normalization normalization = Normalization::Auto;
    LambdaPolicy lambda_policy = LambdaPolicy::TenfoldMax;
    double lambda = 0.0;  // used by the explicit policy
};

struct BuiltModel {
    QuboModel model;
    SimilarityMatrix distances;  // raw Euclidean distances, used for scoring
    SimilarityMatrix block;      // the matrix the model was built from
    double lambda = 0.0;
    std::size_t n_profiles = 0;
    std::size_t n_groups = 0;
    ModelOptions options;
};

inline Normalization resolved_normalization(const ModelOptions& o) {
    if (o.normalization != Normalization::Auto) return o.normalization;
    return o.variant == Variant::Distance ? Normalization::MinMax : Normalization::MaxAbs;
}

inline SimilarityMatrix apply_normalization(const SimilarityMatrix& m, Normalization n) {
    switch (n) {
        case Normalization::MinMax: return normalize_01(m);
        case Normalization::MaxAbs: return scale_max_abs(m);
        default: return m;
    }
}

/// Penalty weight required by the policy for the given model matrix.
inline double resolve_lambda(const ModelOptions& o, const SimilarityMatrix& block, std::size_t n_groups) {
    switch (o.lambda_policy) {
        case LambdaPolicy::TenfoldMax: return 10.0 * block.max_abs_element();
        case LambdaPolicy::DistanceBound: return penalty_lower_bound(block, block.size(), n_groups);
        case LambdaPolicy::Explicit: return o.lambda;
    }
    fail(ErrorCode::ConfigError, "unknown lambda policy");
}

inline BuiltModel build_model(const ProfileSet& profiles, std::size_t n_groups, const ModelOptions& options) {
    if (n_groups < 1) fail(ErrorCode::BadGroupCount, "n_groups must be >= 1");
    if (n_groups > profiles.size()) {
        fail(ErrorCode::GroupCountExceedsProfiles,
             std::to_string(n_groups) + " groups for " + std::to_string(profiles.size()) + " profiles");
    }
    SimilarityMatrix distances = distance_matrix(profiles);
    const Normalization norm = resolved_normalization(options);
    SimilarityMatrix block = options.variant == Variant::Distance
                                 ? apply_normalization(distances, norm)
                                 : apply_normalization(
                                       centered_similarity(kernel_matrix(distances, options.sigma, options.exponent),
                                                           options.centering),
                                       norm);
    const double lambda = resolve_lambda(options, block, n_groups);
    QuboModel model = options.variant == Variant::Distance
                          ? build_distance_qubo(block, n_groups, Penalty::scalar(lambda))
                          : build_kernel_qubo(block, n_groups, Penalty::scalar(lambda));
    return BuiltModel{std::move(model), std::move(distances), std::move(block), lambda, profiles.size(), n_groups,
                      options};
}

inline Json manifest_json(const BuiltModel& b) {
    const Matrix& m = b.block.values();
    Json j;
    j["n_profiles"] = b.n_profiles;
    j["n_groups"] = b.n_groups;
    j["n_vars"] = b.model.size();
    j["variant"] = to_string(b.options.variant);
    j["lambda"] = b.lambda;
    j["lambda_policy"] = to_string(b.options.lambda_policy);
    if (b.options.variant == Variant::Kernel) {
        j["sigma"] = b.options.sigma;
        j["kernel_exponent"] = to_string(b.options.exponent);
        j["centering"] = to_string(b.options.centering);
    }
    j["normalization"] = to_string(resolved_normalization(b.options));
    j["offset"] = b.model.offset();
    j["matrix"] = {{"kind", to_string(b.block.kind())},
                   {"min", m.minCoeff()},
                   {"max", m.maxCoeff()},
                   {"mean", m.mean()},
                   {"max_abs", m.cwiseAbs().maxCoeff()}};
    return j;
}

inline std::string bits_to_string(std::span<const std::uint8_t> bits) {
    std::string s(bits.size(), '0');
    for (std::size_t i = 0; i < bits.size(); ++i) s[i] = bits[i] ? '1' : '0';
    return s;
}

inline BitVector bits_from_string(std::string_view s) {
    BitVector bits(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '0' && s[i] != '1') fail(ErrorCode::ParseError, "bit string may only contain 0 and 1");
        bits[i] = s[i] == '1';
    }
    return bits;
}

inline Json result_json(const SolveResult& r, bool with_timing = true) {
    Json j;
    j["solver"] = r.meta.solver;
    j["seed"] = r.meta.seed;
    j["n_vars"] = r.bits.size();
    j["bits"] = bits_to_string(r.bits);
    j["energy"] = r.energy;
    if (with_timing) j["wall_time_seconds"] = r.wall_time_s;
    j["restarts"] = r.meta.restarts;
    j["iterations"] = r.meta.iterations;
    j["best_restart"] = r.meta.best_restart;
    if (!r.trajectory.empty()) j["trajectory"] = r.trajectory;
    return j;
}

inline SolveResult result_from_json(const Json& j) {
    SolveResult r;
    try {
        r.bits = bits_from_string(j.at("bits").get<std::string>());
        r.energy = j.at("energy").get<double>();
        r.meta.solver = j.value("solver", std::string());
        r.meta.seed = j.value("seed", std::uint64_t{0});
        r.wall_time_s = j.value("wall_time_seconds", 0.0);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::ParseError, std::string("malformed result document: ") + e.what());
    }
    return r;
}

inline Json report_json(const EvalReport& r) {
    Json j;
    j["energy"] = r.energy;
    j["feasible"] = r.feasible;
    j["violations"] = r.violations;
    j["silhouette"] = r.silhouette;
    j["silhouette_defined"] = r.silhouette_defined;
    j["intra_group_distance"] = r.intra_group_distance;
    j["oracle_energy"] = r.oracle_energy ? Json(*r.oracle_energy) : Json(nullptr);
    j["gap_pct"] = r.gap_pct ? Json(*r.gap_pct) : Json(nullptr);
    std::vector<std::size_t> groups;
    groups.reserve(r.assignment.size());
    for (auto g : r.assignment.labels) groups.push_back(g + 1);
    j["n_groups"] = r.assignment.n_groups;
    j["groups"] = groups;
    return j;
}

/// Runs any solver kind on a built model. Baselines cluster the profiles
/// directly; their assignment is one-hot encoded and scored on the model so
/// every solver reports a comparable energy.
inline SolveResult run_solver(const BuiltModel& built, const ProfileSet& profiles, const SolverConfig& config) {
    if (is_qubo_solver(config.kind)) return solve(built.model, config);
    SolveResult r;
    const Stopwatch clock;
    const Assignment a = baseline_cluster(profiles, built.n_groups, config, &r.meta);
    r.wall_time_s = clock.seconds();
    r.bits = encode_one_hot(a);
    r.energy = qubo_energy(built.model, r.bits);
    return r;
}

struct BenchmarkCase {
    std::size_t n_profiles = 0;
    std::size_t n_groups = 0;
};

/// Parses "50:2,60:3". An empty string is an empty list.
inline std::vector<BenchmarkCase> parse_cases(std::string_view text) {
    std::vector<BenchmarkCase> cases;
    while (!text.empty()) {
        const auto comma = text.find(',');
        const std::string_view item = detail::trim(text.substr(0, comma));
        text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
        if (item.empty()) continue;
        const auto colon = item.find(':');
        BenchmarkCase c;
        const auto parse = [&](std::string_view s, std::size_t& out) {
            const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
            return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
        };
        if (colon == std::string_view::npos || !parse(item.substr(0, colon), c.n_profiles) ||
            !parse(item.substr(colon + 1), c.n_groups)) {
            fail(ErrorCode::ConfigError, "bad case '" + std::string(item) + "', expected N:G");
        }
        cases.push_back(c);
    }
    return cases;
}

struct BenchmarkOptions {
    std::vector<BenchmarkCase> cases;
    std::vector<SolverKind> solvers;
    std::vector<double> sigmas;  // empty: use the model options' sigma
    ModelOptions model;
    SolverConfig solver;         // kind is overridden per row
    std::ostream* log = nullptr; // per-row failures are reported here
};

struct BenchmarkRow {
    std::string label;
    std::size_t n_profiles = 0;
    std::size_t n_groups = 0;
    std::size_t n_vars = 0;
    std::string solver;
    std::uint64_t seed = 0;
    bool ok = false;
    double wall_time_s = 0.0;
    double energy = 0.0;
    double silhouette = 0.0;  // 0 for infeasible or single-group results
    bool feasible = false;
    std::optional<double> gap_pct;
    EvalReport report;
};

inline const char* benchmark_header() {
    return "case,n_profiles,n_groups,n_vars,solver,seed,wall_time_s,energy,silhouette,feasible,gap_pct";
}

/// Shortest decimal form that reads back to the same double.
inline std::string format_real(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string format_row(const BenchmarkRow& r) {
    std::ostringstream s;
    s << r.label << ',' << r.n_profiles << ',' << r.n_groups << ',' << r.n_vars << ',' << r.solver << ',' << r.seed
      << ',';
    if (!r.ok) {
        s << ",,,error,";
        return s.str();
    }
    s << format_real(r.wall_time_s) << ',' << format_real(r.energy) << ',' << format_real(r.silhouette) << ','
      << (r.feasible ? "true" : "false") << ',';
    if (r.gap_pct) s << format_real(*r.gap_pct);
    return s.str();
}

/// Every (case, sigma, solver) combination on the first N profiles. Cases
/// small enough for exhaustive search get a brute-force oracle for the gap
/// column. A failing row is recorded and the run continues.
inline std::vector<BenchmarkRow> run_benchmark(const ProfileSet& profiles, const BenchmarkOptions& options) {
    std::vector<BenchmarkRow> rows;
    const std::vector<double> sigmas =
        options.sigmas.empty() ? std::vector<double>{options.model.sigma} : options.sigmas;
    const bool sweep = sigmas.size() > 1;
    for (const BenchmarkCase& c : options.cases) {
        for (double sigma : sigmas) {
            std::string label = std::to_string(c.n_profiles) + ":" + std::to_string(c.n_groups);
            if (sweep) label += "/sigma=" + format_real(sigma);
            const auto report_failure = [&](const std::string& solver, const std::exception& e) {
                BenchmarkRow row;
                row.label = label;
                row.n_profiles = c.n_profiles;
                row.n_groups = c.n_groups;
                row.n_vars = c.n_profiles * c.n_groups;
                row.solver = solver;
                row.seed = options.solver.seed;
                rows.push_back(row);
                if (options.log) *options.log << "case " << label << ", " << solver << ": " << e.what() << '\n';
            };

            std::optional<BuiltModel> built;
            std::optional<ProfileSet> subset;
            try {
                if (c.n_profiles > profiles.size()) {
                    fail(ErrorCode::TooFewProfiles, "case needs " + std::to_string(c.n_profiles) + " profiles, have " +
                                                        std::to_string(profiles.size()));
                }
                subset = profiles.head(c.n_profiles);
                ModelOptions mo = options.model;
                mo.sigma = sigma;
                built = build_model(*subset, c.n_groups, mo);
            } catch (const std::exception& e) {
                for (auto kind : options.solvers) report_failure(std::string(to_string(kind)), e);
                continue;
            }

            std::optional<double> oracle;
            if (built->model.size() <= options.solver.brute_force_max_vars) {
                oracle = brute_force_solve(built->model, options.solver.brute_force_max_vars).energy;
            }
            for (auto kind : options.solvers) {
                try {
                    SolverConfig cfg = options.solver;
                    cfg.kind = kind;
                    const SolveResult result = run_solver(*built, *subset, cfg);
                    BenchmarkRow row;
                    row.label = label;
                    row.n_profiles = c.n_profiles;
                    row.n_groups = c.n_groups;
                    row.n_vars = built->model.size();
                    row.solver = std::string(to_string(kind));
                    row.seed = cfg.seed;
                    row.ok = true;
                    row.wall_time_s = result.wall_time_s;
                    row.report = evaluate(result.bits, built->distances, built->model, c.n_groups, oracle);
                    row.energy = row.report.energy;
                    row.feasible = row.report.feasible;
                    row.silhouette = row.feasible ? row.report.silhouette : 0.0;
                    row.gap_pct = row.report.gap_pct;
                    rows.push_back(std::move(row));
                } catch (const std::exception& e) {
                    report_failure(std::string(to_string(kind)), e);
                }
            }
        }
    }
    return rows;
}

inline void write_benchmark_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows) {
    out << benchmark_header() << '\n';
    for (const auto& r : rows) out << format_row(r) << '\n';
}

}  // namespace qclust

#endif  // QCLUST_PIPELINE_HPP

#ifndef QCLUST_SOLVERS_HPP
#define QCLUST_SOLVERS_HPP

#include "qclust/solvers/anneal.hpp"
#include "qclust/solvers/baseline.hpp"
#include "qclust/solvers/brute_force.hpp"
#include "qclust/solvers/cim.hpp"
#include "qclust/solvers/common.hpp"

namespace qclust {

constexpr bool is_qubo_solver(SolverKind kind) noexcept {
    return kind == SolverKind::BruteForce || kind == SolverKind::Anneal || kind == SolverKind::SimCim;
}

/// Minimises a QUBO with the configured solver. The clustering baselines do
/// not act on QUBO models and are rejected here.
inline SolveResult solve(const QuboModel& model, const SolverConfig& config) {
    switch (config.kind) {
        case SolverKind::BruteForce: {
            SolveResult r = brute_force_solve(model, config.brute_force_max_vars);
            r.meta.seed = config.seed;
            return r;
        }
        case SolverKind::Anneal: return anneal_solve(model, config);
        case SolverKind::SimCim: return cim_solve(model, config);
        default: break;
    }
    fail(ErrorCode::ConfigError, std::string(to_string(config.kind)) + " clusters profiles, not QUBO models");
}

}  // namespace qclust

#endif  // QCLUST_SOLVERS_HPP

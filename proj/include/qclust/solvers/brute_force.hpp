#ifndef QCLUST_SOLVERS_BRUTE_FORCE_HPP
#define QCLUST_SOLVERS_BRUTE_FORCE_HPP

#include <bit>
#include <cmath>
#include <cstdint>
#include <string>

#include "qclust/solvers/common.hpp"

namespace qclust {

/// Exhaustive minimisation over all 2^n assignments in Gray-code order.
/// Ties (within 1e-9 relative) go to the lexicographically smallest bit
/// vector, reading index 0 as the most significant bit.
inline SolveResult brute_force_solve(const QuboModel& model, std::size_t max_vars = 24) {
    const std::size_t n = model.size();
    if (n > max_vars || n > 62) {
        fail(ErrorCode::TooManyVariables, std::to_string(n) + " variables exceeds the exhaustive cap of " +
                                              std::to_string(max_vars));
    }
    const Matrix& q = model.coefficients();
    const Matrix w = Matrix(q.triangularView<Eigen::StrictlyUpper>()) +
                     Matrix(q.triangularView<Eigen::StrictlyUpper>()).transpose();

    const Stopwatch clock;
    BitVector x(n, 0);
    std::vector<double> field(n, 0.0);
    double energy = model.offset();
    BitVector best = x;
    double best_energy = energy;

    const auto tied_and_smaller = [&](double e) {
        const double tol = 1e-9 * std::max(1.0, std::abs(best_energy));
        if (std::abs(e - best_energy) > tol) return false;
        return std::lexicographical_compare(x.begin(), x.end(), best.begin(), best.end());
    };

    const std::uint64_t states = std::uint64_t{1} << n;
    for (std::uint64_t k = 1; k < states; ++k) {
        const auto i = static_cast<std::size_t>(std::countr_zero(k));
        const auto ii = static_cast<Eigen::Index>(i);
        const double delta = (x[i] ? -1.0 : 1.0) * (q(ii, ii) + field[i]);
        x[i] ^= 1;
        energy += delta;
        const double sign = x[i] ? 1.0 : -1.0;
        for (std::size_t j = 0; j < n; ++j) field[j] += sign * w(static_cast<Eigen::Index>(j), ii);
        if ((k & 0xFFFF) == 0) energy = qubo_energy(model, x);  // bound drift

        if (energy < best_energy - 1e-9 * std::max(1.0, std::abs(best_energy)) || tied_and_smaller(energy)) {
            best_energy = std::min(best_energy, energy);
            best = x;
        }
    }

    SolveResult result;
    result.wall_time_s = clock.seconds();
    result.bits = std::move(best);
    result.energy = qubo_energy(model, result.bits);
    result.meta.solver = std::string(to_string(SolverKind::BruteForce));
    result.meta.restarts = 1;
    result.meta.iterations = static_cast<std::size_t>(states);
    return result;
}

}  // namespace qclust

#endif  // QCLUST_SOLVERS_BRUTE_FORCE_HPP

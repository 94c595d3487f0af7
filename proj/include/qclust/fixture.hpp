#ifndef QCLUST_FIXTURE_HPP
#define QCLUST_FIXTURE_HPP

// Seeded synthetic datasets: PV-like daily generation curves drawn from a
// few bell-shaped archetypes, and two concentric rings in the plane.

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include "qclust/profiles.hpp"

namespace qclust {

/// One family of daily curves: peak height, peak hour and width of the bell,
/// multiplicative cloud noise and the number of members.
struct Archetype {
    double peak;
    double centre;
    double width;
    double noise;
    std::size_t count;
};

inline std::vector<Archetype> default_archetypes() {
    return {{1.0, 12.0, 2.6, 0.03, 20},
            {0.9, 12.4, 2.2, 0.03, 18},
            {0.95, 11.6, 2.4, 0.03, 14},
            {0.45, 12.0, 2.4, 0.05, 16},
            {0.306, 12.3, 2.0, 0.05, 12}};
}

struct PvFixtureOptions {
    std::vector<Archetype> archetypes = default_archetypes();
    std::size_t hours = 24;
    double scale = 2.0;
    double peak_jitter = 0.05;    // relative
    double centre_jitter = 0.25;  // hours
    double width_jitter = 0.05;   // relative
    double sunrise = 5.0;
    double sunset = 20.0;
};

/// Each member jitters its archetype's bell, adds bell-shaped noise, is zero
/// outside daylight and clipped at zero. Rows are shuffled so every prefix
/// mixes archetypes.
inline ProfileSet make_pv_fixture(std::uint64_t seed, const PvFixtureOptions& opt = {}) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Vector> rows;
    std::vector<std::string> labels;
    for (std::size_t a = 0; a < opt.archetypes.size(); ++a) {
        const Archetype& arch = opt.archetypes[a];
        for (std::size_t k = 0; k < arch.count; ++k) {
            const double peak = arch.peak * (1.0 + opt.peak_jitter * normal(rng));
            const double centre = arch.centre + opt.centre_jitter * normal(rng);
            const double width = arch.width * (1.0 + opt.width_jitter * normal(rng));
            Vector y(static_cast<Eigen::Index>(opt.hours));
            for (std::size_t h = 0; h < opt.hours; ++h) {
                const double t = static_cast<double>(h) + 0.5;
                const double z = (t - centre) / width;
                const double bell = std::exp(-0.5 * z * z);
                double v = peak * bell + arch.noise * normal(rng) * bell;
                if (t < opt.sunrise || t > opt.sunset) v = 0.0;
                y(static_cast<Eigen::Index>(h)) = std::max(v, 0.0) * opt.scale;
            }
            rows.push_back(std::move(y));
            labels.push_back("a" + std::to_string(a + 1) + "_" + std::to_string(k + 1));
        }
    }
    std::vector<std::size_t> order(rows.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    Matrix values(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(opt.hours));
    std::vector<std::string> shuffled;
    for (std::size_t r = 0; r < order.size(); ++r) {
        values.row(static_cast<Eigen::Index>(r)) = rows[order[r]].transpose();
        shuffled.push_back(labels[order[r]]);
    }
    return ProfileSet(std::move(values), std::move(shuffled));
}

struct RingsOptions {
    std::size_t inner = 20;
    std::size_t outer = 20;
    double inner_radius = 1.0;
    double outer_radius = 3.0;
    double jitter = 0.1;
};

struct LabelledPoints {
    ProfileSet points;
    std::vector<std::size_t> truth;  // 0 inner, 1 outer
};

inline LabelledPoints make_rings(std::uint64_t seed, const RingsOptions& opt = {}) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t n = opt.inner + opt.outer;
    Matrix values(static_cast<Eigen::Index>(n), 2);
    std::vector<std::size_t> truth(n);
    for (std::size_t i = 0; i < n; ++i) {
        const bool outer = i >= opt.inner;
        const double r = (outer ? opt.outer_radius : opt.inner_radius) + opt.jitter * normal(rng);
        const double t = angle(rng);
        values(static_cast<Eigen::Index>(i), 0) = r * std::cos(t);
        values(static_cast<Eigen::Index>(i), 1) = r * std::sin(t);
        truth[i] = outer ? 1 : 0;
    }
    return {ProfileSet(std::move(values)), std::move(truth)};
}

}  // namespace qclust

#endif  // QCLUST_FIXTURE_HPP

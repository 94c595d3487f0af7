#include <sstream>

#include "catch2/catch_amalgamated.hpp"
#include "support.hpp"

using namespace qclust;
using Catch::Approx;
using support::code_of;

namespace {

ProfileSet parse(const std::string& text, LoadOptions opts = {}) {
    std::istringstream in(text);
    return load_profiles(in, opts);
}

}  // namespace

TEST_CASE("load_profiles accepts a rectangular table") {
    std::string text;
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 24; ++c) text += c ? ",0" : "0";
        text += "\n";
    }
    const ProfileSet p = parse(text);
    CHECK(p.size() == 3);
    CHECK(p.length() == 24);
}

TEST_CASE("load_profiles rejects malformed tables") {
    std::string rows;
    for (int r = 0; r < 3; ++r) {
        const int width = r == 1 ? 23 : 24;
        for (int c = 0; c < width; ++c) rows += c ? ",1" : "1";
        rows += "\n";
    }
    CHECK(code_of([&] { parse(rows); }) == ErrorCode::RaggedTable);
    CHECK(code_of([] { parse("1,2\n3,x\n"); }) == ErrorCode::NonNumericCell);
    CHECK(code_of([] { parse("1,2\n3,\n"); }) == ErrorCode::NonNumericCell);
    CHECK(code_of([] { parse("1,2\n3,nan\n"); }) == ErrorCode::NonNumericCell);
    CHECK(code_of([] { parse("1,2,3\n"); }) == ErrorCode::TooFewProfiles);
    CHECK(code_of([] { parse(""); }) == ErrorCode::TooFewProfiles);
}

TEST_CASE("load_profiles handles headers and column-major layout") {
    const ProfileSet rows = parse("h1,h2,h3\n1,2,3\n4,5,6\n", {Layout::RowMajor, true});
    CHECK(rows.size() == 2);
    CHECK(rows.values()(1, 2) == 6.0);

    const ProfileSet cols = parse("a,b\n1,4\n2,5\n3,6\n", {Layout::ColumnMajor, true});
    REQUIRE(cols.size() == 2);
    CHECK(cols.length() == 3);
    CHECK(cols.values()(1, 0) == 4.0);
    CHECK(cols.labels() == std::vector<std::string>{"a", "b"});
}

TEST_CASE("committed fixture has 80 profiles of 24 hours") {
    const ProfileSet p = load_profiles_file(support::fixture_path("pv80.csv"));
    CHECK(p.size() == 80);
    CHECK(p.length() == 24);
    CHECK(p.values().minCoeff() >= 0.0);
}

TEST_CASE("fixture generator reproduces the committed file") {
    std::ostringstream generated;
    write_profiles_csv(generated, make_pv_fixture(7));
    std::ifstream in(support::fixture_path("pv80.csv"));
    std::stringstream committed;
    committed << in.rdbuf();
    CHECK(generated.str() == committed.str());
}

TEST_CASE("hourly_average takes block means") {
    const ProfileSet p(Matrix{{1, 1, 3, 3}, {0, 2, 4, 6}});
    const ProfileSet h = hourly_average(p, 2);
    CHECK(h.length() == 2);
    CHECK(h.values()(0, 0) == 1.0);
    CHECK(h.values()(0, 1) == 3.0);
    CHECK(h.values()(1, 1) == 5.0);

    const ProfileSet five_minute(Matrix::Ones(2, 288));
    CHECK(hourly_average(five_minute, 12).length() == 24);
    const ProfileSet day(Matrix::Ones(2, 24));
    CHECK(code_of([&] { hourly_average(day, 5); }) == ErrorCode::IndivisibleLength);
}

TEST_CASE("distance_matrix") {
    const ProfileSet same(Matrix{{1, 2}, {1, 2}});
    CHECK(distance_matrix(same)(0, 1) == 0.0);

    const ProfileSet triangle(Matrix{{0, 0}, {3, 4}});
    const SimilarityMatrix d = distance_matrix(triangle);
    CHECK(d(0, 1) == Approx(5.0).margin(1e-15));
    CHECK(d(1, 0) == d(0, 1));
    CHECK(d.kind() == MatrixKind::Distance);

    std::mt19937_64 rng(11);
    const ProfileSet p = support::random_profiles(rng, 5, 8);
    std::vector<std::vector<double>> points(5);
    for (Eigen::Index i = 0; i < 5; ++i)
        for (Eigen::Index t = 0; t < 8; ++t) points[static_cast<std::size_t>(i)].push_back(p.values()(i, t));
    const auto reference = oracle::euclidean(points);
    const SimilarityMatrix dm = distance_matrix(p);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) CHECK(dm(i, j) == Approx(reference[i][j]).margin(1e-12));
}

TEST_CASE("kernel_matrix") {
    const SimilarityMatrix d(Matrix{{0, 2}, {2, 0}}, MatrixKind::Distance);
    const SimilarityMatrix k = kernel_matrix(d, 1.0);
    CHECK(k(0, 0) == 1.0);
    CHECK(k(0, 1) == Approx(0.367879441171442).margin(1e-12));
    CHECK(kernel_matrix(d, 1.0, KernelExponent::Squared)(0, 1) == Approx(std::exp(-2.0)).margin(1e-15));
    CHECK(kernel_matrix(d, 0.1)(1, 1) == 1.0);

    CHECK(code_of([&] { kernel_matrix(d, 0.0); }) == ErrorCode::NonPositiveSigma);
    CHECK(code_of([&] { kernel_matrix(d, -1.0); }) == ErrorCode::NonPositiveSigma);
    CHECK(code_of([&] { kernel_matrix(k, 1.0); }) == ErrorCode::KindMismatch);

    std::mt19937_64 rng(5);
    const SimilarityMatrix rd = distance_matrix(support::random_profiles(rng, 5, 3));
    const SimilarityMatrix rk = kernel_matrix(rd, 0.5);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) CHECK(rk(i, j) == Approx(std::exp(-rd(i, j) / 0.5)).margin(1e-12));
}

TEST_CASE("centered_similarity") {
    const SimilarityMatrix ones(Matrix::Ones(3, 3), MatrixKind::Kernel);
    const SimilarityMatrix sub = centered_similarity(ones, Centering::SubtractGrand);
    const SimilarityMatrix standard = centered_similarity(ones, Centering::Standard);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(sub(i, j) == Approx(-2.0).margin(1e-15));
            CHECK(standard(i, j) == Approx(0.0).margin(1e-15));
        }
    }
    CHECK(sub.kind() == MatrixKind::CenteredSimilarity);

    std::mt19937_64 rng(3);
    const SimilarityMatrix k = kernel_matrix(distance_matrix(support::random_profiles(rng, 4, 6)), 0.7);
    const SimilarityMatrix g = centered_similarity(k);  // subtract-grand by default
    const std::size_t n = 4;
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) total += k(r, c);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double row = 0.0, col = 0.0;
            for (std::size_t c = 0; c < n; ++c) row += k(i, c);
            for (std::size_t r = 0; r < n; ++r) col += k(r, j);
            const double expected = k(i, j) - row / n - col / n - total / (n * n);
            CHECK(g(i, j) == Approx(expected).margin(1e-12));
            CHECK(g(i, j) == g(j, i));
        }
    }
    CHECK(code_of([&] { centered_similarity(g); }) == ErrorCode::KindMismatch);
}

TEST_CASE("normalize_01 and scale_max_abs") {
    const SimilarityMatrix m(Matrix{{-2, 0}, {0, 2}}, MatrixKind::CenteredSimilarity);
    const SimilarityMatrix n = normalize_01(m);
    CHECK(n(0, 0) == 0.0);
    CHECK(n(0, 1) == 0.5);
    CHECK(n(1, 1) == 1.0);
    CHECK(n.normalized());

    const SimilarityMatrix unit(Matrix{{0, 1}, {1, 0}}, MatrixKind::Distance);
    CHECK(normalize_01(unit).values() == unit.values());

    const SimilarityMatrix flat(Matrix::Constant(2, 2, 3.0), MatrixKind::Kernel);
    CHECK(code_of([&] { normalize_01(flat); }) == ErrorCode::DegenerateRange);

    const SimilarityMatrix scaled = scale_max_abs(SimilarityMatrix(Matrix{{-4, 1}, {1, 2}}, MatrixKind::CenteredSimilarity));
    CHECK(scaled(0, 0) == -1.0);
    CHECK(scaled(1, 1) == 0.5);
    CHECK(code_of([] { scale_max_abs(SimilarityMatrix(Matrix::Zero(2, 2), MatrixKind::Distance)); }) ==
          ErrorCode::DegenerateRange);
}

TEST_CASE("ProfileSet rejects invalid values") {
    CHECK(code_of([] { ProfileSet(Matrix::Ones(1, 3)); }) == ErrorCode::TooFewProfiles);
    Matrix bad = Matrix::Ones(2, 2);
    bad(0, 1) = std::numeric_limits<double>::infinity();
    CHECK(code_of([&] { ProfileSet{bad}; }) == ErrorCode::NonNumericCell);
}

TEST_CASE("matrix CSV round-trips exactly") {
    std::mt19937_64 rng(9);
    const SimilarityMatrix d = distance_matrix(support::random_profiles(rng, 4, 5));
    std::ostringstream out;
    write_matrix_csv(out, d);
    std::istringstream in(out.str());
    const ProfileSet back = load_profiles(in);
    CHECK(back.values() == d.values());
}

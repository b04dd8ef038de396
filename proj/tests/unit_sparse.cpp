#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "poresim/errors.hpp"
#include "poresim/sparse.hpp"
#include "support/builders.hpp"
#include "support/dense_oracle.hpp"

using namespace poresim;
using poresim::testing::dense_solve;
using poresim::testing::DenseMatrix;

namespace {

SparseSymmetricMatrix two_by_two() {
    return SparseSymmetricMatrix::from_triplets(
        2, {{0, 0, 1.1}, {1, 1, 1.1}, {0, 1, -0.1}, {1, 0, -0.1}});
}

/// Random SPD matrix: weighted graph Laplacian plus a positive diagonal.
SparseSymmetricMatrix random_spd(int n, std::mt19937_64& rng, DenseMatrix* dense_out = nullptr) {
    DenseMatrix dense(static_cast<size_t>(n), std::vector<double>(static_cast<size_t>(n), 0.0));
    for (int i = 0; i < n; ++i) dense[static_cast<size_t>(i)][static_cast<size_t>(i)] = 0.1 + poresim::testing::uniform01(rng);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (poresim::testing::uniform01(rng) > 3.0 / n) continue;
            const double w = poresim::testing::uniform01(rng);
            dense[static_cast<size_t>(i)][static_cast<size_t>(j)] -= w;
            dense[static_cast<size_t>(j)][static_cast<size_t>(i)] -= w;
            dense[static_cast<size_t>(i)][static_cast<size_t>(i)] += w;
            dense[static_cast<size_t>(j)][static_cast<size_t>(j)] += w;
        }
    std::vector<Triplet> triplets;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (dense[static_cast<size_t>(i)][static_cast<size_t>(j)] != 0.0)
                triplets.push_back({i, j, dense[static_cast<size_t>(i)][static_cast<size_t>(j)]});
    if (dense_out != nullptr) *dense_out = dense;
    return SparseSymmetricMatrix::from_triplets(n, triplets);
}

} // namespace

TEST_CASE("matvec on a diagonal matrix is the elementwise product") {
    const auto d = SparseSymmetricMatrix::from_triplets(3, {{0, 0, 2.0}, {1, 1, 3.0}, {2, 2, 4.0}});
    CHECK(d.matvec({1.0, 1.0, 2.0}) == std::vector<double>{2.0, 3.0, 8.0});
}

TEST_CASE("matvec row sums and the zero vector") {
    const auto a = two_by_two();
    CHECK(a.matvec({1.0, 1.0}) == std::vector<double>{1.0, 1.0}); // row-sum identity
    CHECK(a.matvec({0.0, 0.0}) == std::vector<double>{0.0, 0.0});
    CHECK_THROWS_AS(a.matvec({1.0, 2.0, 3.0}), DimensionMismatch);
}

TEST_CASE("construction rejects broken matrices") {
    // Missing diagonal.
    CHECK_THROWS_AS(SparseSymmetricMatrix::from_triplets(2, {{0, 0, 1.0}, {0, 1, -0.5}, {1, 0, -0.5}}),
                    ValidationError);
    // Zero diagonal.
    CHECK_THROWS_AS(SparseSymmetricMatrix::from_triplets(1, {{0, 0, 0.0}}), ValidationError);
    // Asymmetric value.
    CHECK_THROWS_AS(SparseSymmetricMatrix::from_triplets(
                        2, {{0, 0, 1.0}, {1, 1, 1.0}, {0, 1, -0.5}, {1, 0, -0.4}}),
                    ValidationError);
    // Missing mirror entry.
    CHECK_THROWS_AS(SparseSymmetricMatrix::from_triplets(2, {{0, 0, 1.0}, {1, 1, 1.0}, {0, 1, -0.5}}),
                    ValidationError);
}

TEST_CASE("pcg: zero rhs returns the zero vector in zero iterations") {
    const PcgResult result = pcg_solve(two_by_two(), {0.0, 0.0});
    CHECK(result.x == std::vector<double>{0.0, 0.0});
    CHECK(result.iterations == 0);
}

TEST_CASE("pcg solves the worked 2x2 system") {
    const PcgResult result = pcg_solve(two_by_two(), {1.0, 0.0});
    CHECK(result.x[0] == doctest::Approx(11.0 / 12.0).epsilon(1e-10));
    CHECK(result.x[1] == doctest::Approx(1.0 / 12.0).epsilon(1e-10));
}

TEST_CASE("pcg matches the dense oracle on random 200-node SPD systems") {
    std::mt19937_64 rng(103);
    for (int trial = 0; trial < 5; ++trial) {
        DenseMatrix dense;
        const SparseSymmetricMatrix a = random_spd(200, rng, &dense);
        std::vector<double> b(200);
        for (double& v : b) v = poresim::testing::uniform01(rng) - 0.3;

        const PcgResult result = pcg_solve(a, b);
        const std::vector<double> exact = dense_solve(dense, b);
        double scale = 0.0;
        for (double v : exact) scale = std::max(scale, std::abs(v));
        for (size_t i = 0; i < exact.size(); ++i)
            CHECK(std::abs(result.x[i] - exact[i]) <= 1e-8 * scale);

        // Residual actually meets the advertised tolerance.
        const std::vector<double> ax = a.matvec(result.x);
        double r2 = 0.0, b2 = 0.0;
        for (size_t i = 0; i < b.size(); ++i) {
            r2 += (ax[i] - b[i]) * (ax[i] - b[i]);
            b2 += b[i] * b[i];
        }
        CHECK(std::sqrt(r2 / b2) <= 1e-10);
        CHECK(result.final_residual <= 1.0); // never worse than the initial guess
    }
}

TEST_CASE("pcg diverges cleanly when starved of iterations") {
    std::mt19937_64 rng(107);
    const SparseSymmetricMatrix a = random_spd(100, rng);
    std::vector<double> b(100, 1.0);
    PcgOptions options;
    options.max_iter = 1;
    options.tol = 1e-14;
    CHECK_THROWS_AS(pcg_solve(a, b, options), SolverDivergence);
}

TEST_CASE("pcg flags non-finite input instead of looping") {
    const auto a = two_by_two();
    CHECK_THROWS_AS(pcg_solve(a, {std::numeric_limits<double>::quiet_NaN(), 0.0}),
                    NonFiniteEncountered);
}

TEST_CASE("jacobi preconditioning stays within 2x of plain CG iterations") {
    std::mt19937_64 rng(109);
    for (int trial = 0; trial < 5; ++trial) {
        const SparseSymmetricMatrix a = random_spd(150, rng);
        std::vector<double> b(150);
        for (double& v : b) v = poresim::testing::uniform01(rng);

        PcgOptions jacobi;
        PcgOptions plain;
        plain.jacobi = false;
        const int with = pcg_solve(a, b, jacobi).iterations;
        const int without = pcg_solve(a, b, plain).iterations;
        CHECK(with <= 2 * without);
    }
}

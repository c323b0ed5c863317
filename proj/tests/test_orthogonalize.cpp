#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "hermat/orthogonalize.hpp"
#include "support.hpp"

using namespace hermat;
using testing_support::params;

TEST_CASE("monic sequence invariants")
{
    const auto p = params({Complex(1.0, -0.5), Complex(0.8, 0.0)}, 2.0);
    const auto seq = monic_sequence(p, 12);
    REQUIRE(seq.size() == 13);
    CHECK_FALSE(seq.truncated);
    for (std::size_t n = 0; n < seq.size(); ++n) {
        CHECK(seq.polys[n].trimmed().degree() == static_cast<int>(n));
        CHECK(max_abs_diff(seq.polys[n].leading(), ComplexMatrix::identity(3)) == 0.0);
        CHECK(hermitian_defect(seq.norms[n]) <= 1e-14 * seq.norms[n].max_abs());
        CHECK(min_hermitian_eigenvalue(seq.norms[n]) > 0.0);
    }
    CHECK(orthogonality_defect(seq) < 1e-8);
}

TEST_CASE("nmax = 0 gives the identity")
{
    const auto seq = monic_sequence(params({1.0}, 2.0), 0);
    REQUIRE(seq.size() == 1);
    CHECK(max_coeff_diff(seq.polys[0], MatrixPolynomial::constant(ComplexMatrix::identity(2))) == 0.0);
    CHECK(max_abs_diff(seq.norms[0], weight_moment(params({1.0}, 2.0), 0)) < 1e-14);
}

TEST_CASE("recurrence tables")
{
    const auto seq = monic_sequence(params({Complex(0.3, 1.0)}, 3.0), 10);
    CHECK_THROWS_AS(recurrence_from_sequence(monic_sequence(params({1.0}, 2.0), 0)), std::invalid_argument);

    const auto mono = recurrence_from_sequence(seq);
    CHECK(mono.kind == RecurrenceKind::monic);
    CHECK(std::string(to_string(mono.kind)) == "monic");
    CHECK(mono.A.size() == mono.B.size() + 1);
    for (const auto& a : mono.A) {
        if (!a.is_zero()) {
            CHECK(max_abs_diff(a, ComplexMatrix::identity(2)) == 0.0);
        }
    }
    CHECK(mono.max_residual() < 1e-8);

    const auto on = orthonormalize_sequence(seq);
    CHECK(on.table.kind == RecurrenceKind::orthonormal);
    CHECK(on.b_hermitian_defect < 1e-9);
    CHECK(on.table.max_residual() < 1e-8);
    for (std::size_t n = 1; n < on.table.C.size(); ++n) {
        CHECK(max_abs_diff(on.table.C[n], on.table.A[n].adjoint()) == 0.0);
        CHECK(std::abs(on.table.A[n](0, 0) * on.table.A[n](1, 1)) > 0.0);
    }
    // Diagonal gauge: the monic norm is diagonal for N = 2, hence so is Delta_n.
    for (const auto& d : on.delta) {
        CHECK(max_offdiagonal(d) == 0.0);
    }
}

TEST_CASE("monic B vanishes linearly as the coupling goes to zero")
{
    const auto small = recurrence_from_sequence(monic_sequence(params({1e-6}, 2.0), 8));
    const auto tiny = recurrence_from_sequence(monic_sequence(params({1e-9}, 2.0), 8));
    for (std::size_t n = 0; n < small.B.size(); ++n) {
        CHECK(tiny.B[n].max_abs() < 1e-6);
        CHECK(small.B[n].max_abs() / tiny.B[n].max_abs() == doctest::Approx(1000.0).epsilon(1e-6));
    }
}

TEST_CASE("orthonormal polynomials are orthonormal")
{
    const auto p = params({Complex(1.0, 1.0), Complex(-0.5, 0.25)}, 0.7);
    const auto on = orthonormalize_sequence(monic_sequence(p, 10));
    const MomentTable<Complex> moments(build_structure(p));
    for (std::size_t n = 0; n < on.polys.size(); ++n) {
        for (std::size_t m = 0; m <= n; ++m) {
            const auto g = moments.sandwich(on.polys[n], on.polys[m]);
            const auto expected = n == m ? ComplexMatrix::identity(3) : ComplexMatrix(3);
            CHECK(max_abs_diff(g, expected) < 1e-8);
        }
    }
}

TEST_CASE("property: random draws keep the sequence orthogonal with a valid recurrence")
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const auto p = testing_support::random_params(rng, 2, 5);
        const auto seq = monic_sequence(p, 15);
        CHECK(seq.size() >= 2);
        if (seq.truncated) {
            CHECK_FALSE(seq.diagnostic.empty());
        }
        CHECK(orthogonality_defect(seq) < 1e-8);
        CHECK(recurrence_from_sequence(seq).max_residual() < 1e-8);
        const auto on = orthonormalize_sequence(seq);
        CHECK(on.b_hermitian_defect < 1e-9);
    }
}

TEST_CASE("guard truncates instead of returning inaccurate polynomials")
{
    OrthogonalizeOptions strict;
    strict.max_condition = 1e3;
    const auto seq = monic_sequence(params({1.0, 1.0, 1.0, 1.0}, 5.0), 20, strict);
    CHECK(seq.truncated);
    CHECK(seq.size() < 21);
    CHECK(seq.diagnostic.find("degree") != std::string::npos);
}

TEST_CASE("Gauss-Hermite rule")
{
    const auto rule = gauss_hermite_rule(20);
    REQUIRE(rule.nodes.size() == 20);
    double total = 0.0;
    for (std::size_t i = 0; i < 20; ++i) {
        total += rule.weights[i];
        CHECK(rule.nodes[i] == -rule.nodes[19 - i]);
    }
    CHECK(total == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
    CHECK_THROWS_AS(gauss_hermite_rule(0), std::invalid_argument);

    // int t^2 e^{-t^2} = sqrt(pi)/2
    const auto v = gauss_hermite_integrate(
        [](double t) { return ComplexMatrix::identity(2) * Complex(t * t); }, 1.0, rule);
    CHECK(max_abs_diff(v, ComplexMatrix::identity(2) * Complex(std::sqrt(std::numbers::pi) / 2.0)) < 1e-15);
    CHECK_THROWS_AS(gauss_hermite_integrate([](double) { return ComplexMatrix::identity(1); }, 0.0, rule),
                    std::invalid_argument);
}

TEST_CASE("quadrature oracle")
{
    const auto p = params({Complex(1.5, -0.5)}, 2.0);
    const auto w0 = quadrature_oracle(p, [](double) { return ComplexMatrix::identity(2); }, 0);
    const auto exact = weight_moment(p, 0);
    CHECK(max_abs_diff(w0.value, exact) <= 1e-10 * exact.max_abs());

    const auto seq = monic_sequence(p, 3);
    const auto cross = quadrature_oracle(
        p, [&](double t) { return seq.polys[1](t); }, [&](double t) { return seq.polys[0](t); }, 1);
    CHECK(cross.value.max_abs() < 1e-9);
}

TEST_CASE("property: exact moments agree with quadrature for N <= 5, m <= 30")
{
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        const auto p = testing_support::random_params(rng, 2, 5);
        const auto r = oracle_moment_agreement(p, 30);
        CHECK(r.max_relative < 1e-9);
    }
}

#include "doctest.h"

#include <random>

#include "hermat/differential_operator.hpp"
#include "hermat/orthogonalize.hpp"
#include "support.hpp"

using namespace hermat;
using testing_support::params;

TEST_CASE("operator coefficients for N = 2")
{
    const Complex a(0.7, 1.2);
    const double b = 3.0;
    const auto op = build_operator(params({a}, b));
    const auto zero = ComplexMatrix(2);

    const MatrixPolynomial f2(2, {ComplexMatrix::diagonal({1.0, b}), ComplexMatrix(2, {0.0, a * (b - 1.0), 0.0, 0.0})});
    const MatrixPolynomial f1(2, {ComplexMatrix(2, {0.0, 2.0 * a * b, 0.0, 0.0}),
                                  ComplexMatrix::identity(2) * Complex(-2.0 * b)});
    const MatrixPolynomial f0 = MatrixPolynomial::constant(ComplexMatrix::diagonal({0.0, 2.0 * b}));
    CHECK(max_coeff_diff(op.F2, f2) < 1e-15);
    CHECK(max_coeff_diff(op.F1, f1) < 1e-15);
    CHECK(max_coeff_diff(op.F0, f0) < 1e-15);
    CHECK(op.F2.trimmed().degree() <= 2);
    CHECK(op.F1.trimmed().degree() <= 1);
    CHECK(op.F0.trimmed().degree() <= 0);
}

TEST_CASE("small coupling approaches the decoupled operator")
{
    const double b = 2.5;
    const auto op = build_operator(params({1e-9}, b));
    CHECK(max_coeff_diff(op.F2, MatrixPolynomial::constant(ComplexMatrix::diagonal({1.0, b}))) < 1e-8);
    CHECK(max_coeff_diff(op.F1, Complex(-2.0 * b) * MatrixPolynomial::monomial(2, 1)) < 1e-8);
    CHECK(max_coeff_diff(op.F0, MatrixPolynomial::constant(ComplexMatrix::diagonal({0.0, 2.0 * b}))) < 1e-8);
}

TEST_CASE("operator action")
{
    const auto p = params({Complex(1.0, -0.5), Complex(0.3, 0.3)}, 0.8);
    const auto op = build_operator(p);
    const auto id = MatrixPolynomial::constant(ComplexMatrix::identity(3));
    CHECK(max_coeff_diff(apply_operator(op, id), op.F0) == 0.0);

    const auto op2 = build_operator(params({1.0}, 2.0));
    const auto t = MatrixPolynomial::monomial(2, 1);
    CHECK(max_coeff_diff(apply_operator(op2, t), op2.F1 + t * op2.F0) < 1e-15);

    CHECK_THROWS_AS(apply_operator(op, t), std::invalid_argument);
}

TEST_CASE("eigenvalue matrix")
{
    for (double b : {0.5, 2.0, 4.0}) {
        const auto p = params({Complex(1.0, 1.0)}, b);
        for (unsigned n = 0; n <= 25; ++n) {
            CHECK(max_abs_diff(eigenvalue_matrix(p, n), ComplexMatrix::diagonal({-2.0 * b * n, -2.0 * b * (n - 1.0)}))
                  < 1e-13);
        }
    }
    const auto p = params({Complex(1.0, 0.2), Complex(-0.5, 0.0), Complex(2.0, 1.0)}, 1.7);
    const auto s = build_structure(p);
    const auto expected0 = build_operator(s).F0.coeff(0);
    CHECK(max_abs_diff(eigenvalue_matrix(s, 0), expected0) < 1e-14);
}

TEST_CASE("symmetry equations on the default weight")
{
    const auto r = check_symmetry_equations(params({1.0}, 2.0), testing_support::grid());
    CHECK(r.residual_ccp < 1e-10);
    CHECK(r.residual_first_order < 1e-10);
    CHECK(r.residual_second_order < 1e-10);
    CHECK(r.boundary_decay_ok);
    CHECK(r.boundary_radius == 8.0);
}

TEST_CASE("symmetry equations at N = 5")
{
    std::mt19937_64 rng(8);
    auto p = testing_support::random_params(rng, 5, 5);
    p.b = 0.5;
    const auto r = check_symmetry_equations(p, testing_support::grid());
    CHECK(r.residual_ccp < 1e-9);
    CHECK(r.residual_first_order < 1e-9);
    CHECK(r.residual_second_order < 1e-9);
    CHECK(r.boundary_decay_ok);
}

TEST_CASE("decoupled weight is exactly symmetric")
{
    WeightParams p = params({1e-300}, 3.0);
    const auto r = check_symmetry_equations(p, testing_support::grid());
    CHECK(r.residual_ccp == 0.0);
}

TEST_CASE("property: symmetry equations and chi/xi on random draws")
{
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = testing_support::random_params(rng, 2, 6);
        const auto r = check_symmetry_equations(p, testing_support::grid());
        CHECK(r.residual_ccp >= 0.0);
        CHECK(r.residual_ccp < 1e-9);
        CHECK(r.residual_first_order < 1e-9);
        CHECK(r.residual_second_order < 1e-9);
        CHECK(r.chi_hermitian_residual < 1e-9);
        CHECK(r.xi_offdiagonal_residual < 1e-9);
        CHECK(r.xi_diagonal_residual < 1e-9);
        CHECK(r.boundary_decay_ok);
    }
}

TEST_CASE("chi and xi at single points")
{
    const auto at_zero = check_chi_xi(params({Complex(0.4, -2.0), Complex(1.0, 1.0)}, 3.0), {0.0});
    CHECK(at_zero.xi_diagonal_residual < 1e-12);
    CHECK(at_zero.xi_offdiagonal_residual < 1e-12);

    const auto r = check_chi_xi(params({1.0}, 3.0), {1.2});
    CHECK(r.xi_offdiagonal_residual < 1e-12);
    CHECK(r.xi_diagonal_residual < 1e-12);
    CHECK(r.chi_hermitian_residual < 1e-12);
}

TEST_CASE("bilinear symmetry through moments")
{
    const auto p = params({1.0}, 2.0);
    const auto id = MatrixPolynomial::constant(ComplexMatrix::identity(2));
    CHECK(symmetry_bilinear_check(p, id, id) < 1e-10);
    CHECK(symmetry_bilinear_check(p, id, MatrixPolynomial::monomial(2, 1)) < 1e-10);

    std::mt19937_64 rng(12);
    const auto p3 = params({Complex(0.8, 0.1), Complex(-0.4, 1.0)}, 1.6);
    for (int trial = 0; trial < 5; ++trial) {
        const auto P = testing_support::random_polynomial(rng, 3, 3);
        const auto Q = testing_support::random_polynomial(rng, 3, 3);
        CHECK(symmetry_bilinear_check(p3, P, Q) < 1e-8);
    }
}

TEST_CASE("property: eigen-equation on the monic sequence, N <= 5, n <= 25")
{
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 6; ++trial) {
        auto p = testing_support::random_params(rng, 2, 5);
        // Keep b moderate so the sequence is not truncated before n = 25.
        p.b = 0.5 + std::fmod(p.b, 2.0);
        const auto s = build_structure(p);
        const auto op = build_operator(s);
        const auto seq = monic_sequence(p, 25);
        for (std::size_t n = 0; n < seq.size(); ++n) {
            const auto& poly = seq.polys[n];
            const auto lam = eigenvalue_matrix(s, static_cast<unsigned>(n));
            const auto d = apply_operator(op, poly) - lam * poly;
            CHECK(d.max_coeff_abs() < 1e-7 * poly.max_coeff_abs());
        }
    }
}

TEST_CASE("property: Delta_n Lambda_n Delta_n^{-1} is Hermitian")
{
    for (double b : {0.5, 3.0}) {
        const auto p = params({Complex(1.0, 1.0)}, b);
        const auto seq = monic_sequence(p, 25);
        const auto on = orthonormalize_sequence(seq);
        for (std::size_t n = 0; n < seq.size(); ++n) {
            const auto lam = eigenvalue_matrix(p, static_cast<unsigned>(n));
            CHECK(max_offdiagonal(lam) == 0.0);
            const auto h = on.delta[n] * lam * inverse(on.delta[n]);
            CHECK(hermitian_defect(h) <= 1e-10 * std::max(1.0, h.max_abs()));
        }
    }
}

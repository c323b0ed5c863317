#include "doctest.h"

#include <cmath>
#include <random>

#include "hermat/gauss_erf.hpp"
#include "hermat/linalg.hpp"
#include "support.hpp"

using namespace hermat;
using testing_support::random_matrix;

namespace {

ComplexMatrix upper_bidiagonal(const std::vector<Complex>& a)
{
    ComplexMatrix m(a.size() + 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        m(i, i + 1) = a[i];
    }
    return m;
}

} // namespace

TEST_CASE("matrix polynomial evaluation")
{
    const auto id = ComplexMatrix::identity(2);
    CHECK(max_abs_diff(MatrixPolynomial::constant(id)(3.5), id) == 0.0);
    CHECK(max_abs_diff(MatrixPolynomial(2, {ComplexMatrix(2), id})(2.0), id * Complex(2.0)) == 0.0);

    const Complex a(0.3, -1.1);
    const auto e = nilpotent_exp(upper_bidiagonal({a}));
    ComplexMatrix expected = id;
    expected(0, 1) = a;
    CHECK(max_abs_diff(e(1.0), expected) == 0.0);
}

TEST_CASE("derivatives follow the power rule")
{
    std::mt19937_64 rng(1);
    const auto c0 = random_matrix(rng, 3);
    const auto c1 = random_matrix(rng, 3);
    const auto c2 = random_matrix(rng, 3);
    CHECK(MatrixPolynomial::constant(c0).derivative().trimmed().degree() == -1);

    const auto d = MatrixPolynomial(3, {c0, c1, c2}).derivative();
    CHECK(max_coeff_diff(d, MatrixPolynomial(3, {c1, c2 * Complex(2.0)})) == 0.0);

    const auto d2 = MatrixPolynomial::monomial(3, 2).derivative(2);
    CHECK(max_coeff_diff(d2, MatrixPolynomial::constant(ComplexMatrix::identity(3) * Complex(2.0))) == 0.0);
}

TEST_CASE("degree of the zero polynomial is -1")
{
    CHECK(MatrixPolynomial(2).degree() == -1);
    CHECK(MatrixPolynomial(2, {ComplexMatrix(2), ComplexMatrix(2)}).degree() == -1);
    CHECK(MatrixPolynomial::monomial(2, 4).degree() == 4);
}

TEST_CASE("nilpotent exponential")
{
    const auto zero = nilpotent_exp(ComplexMatrix(3));
    CHECK(zero.trimmed().degree() == 0);
    CHECK(max_abs_diff(zero.coeff(0), ComplexMatrix::identity(3)) == 0.0);

    const Complex a1(1.5, 0.5);
    const Complex a2(-0.25, 2.0);
    const auto m = upper_bidiagonal({a1, a2});
    const auto e = nilpotent_exp(m);
    CHECK(e.trimmed().degree() == 2);
    CHECK(max_abs_diff(e.coeff(1), m) == 0.0);
    ComplexMatrix sq(3);
    sq(0, 2) = a1 * a2 / 2.0;
    CHECK(max_abs_diff(e.coeff(2), sq) < 1e-15);

    SUBCASE("non-nilpotent input is rejected")
    {
        ComplexMatrix bad = m;
        bad(2, 0) = 1.0;
        CHECK_THROWS_AS(nilpotent_exp(bad), std::domain_error);
    }
}

TEST_CASE("property: e^{Mt} e^{-Mt} = I for nilpotent M")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + trial % 5;
        std::vector<Complex> a;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            a.emplace_back(u(rng), u(rng));
        }
        const auto e = nilpotent_exp(upper_bidiagonal(a));
        for (double t : {-10.0, -3.3, 0.0, 0.7, 10.0}) {
            const auto prod = e(t) * e(-t);
            CHECK(max_abs_diff(prod, ComplexMatrix::identity(n)) / std::max(1.0, e(t).max_abs() * e(-t).max_abs())
                  < 1e-12);
        }
    }
}

TEST_CASE("ad powers")
{
    const auto a = upper_bidiagonal({Complex(2.0, 1.0)});
    const auto j = ComplexMatrix::diagonal({0.0, 1.0});
    CHECK(max_abs_diff(ad_power(a, j, 0), j) == 0.0);
    CHECK(max_abs_diff(ad_power(a, j, 1), a) == 0.0);
    CHECK(ad_power(a, j, 2).is_zero());
}

TEST_CASE("property: ad^{n+1}(X, Y) = ad^n(X, ad(X, Y))")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const auto x = random_matrix(rng, 4);
        const auto y = random_matrix(rng, 4);
        for (unsigned n = 0; n <= 6; ++n) {
            const auto lhs = ad_power(x, y, n + 1);
            const auto rhs = ad_power(x, ad_power(x, y, 1), n);
            CHECK(max_abs_diff(lhs, rhs) <= 1e-12 * std::max(1.0, lhs.max_abs()));
        }
    }
}

TEST_CASE("inverse, Cholesky and Hermitian helpers")
{
    std::mt19937_64 rng(5);
    const auto m = random_matrix(rng, 4);
    CHECK(max_abs_diff(m * inverse(m), ComplexMatrix::identity(4)) < 1e-12);
    CHECK_THROWS_AS(inverse(ComplexMatrix(3)), std::domain_error);

    const auto h = m * m.adjoint() + ComplexMatrix::identity(4);
    CHECK(hermitian_defect(h) < 1e-14);
    const auto u = upper_cholesky(h);
    CHECK(max_abs_diff(u * u.adjoint(), h) < 1e-12);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(u(i, i).real() > 0.0);
        CHECK(u(i, i).imag() == 0.0);
        for (std::size_t k = 0; k < i; ++k) {
            CHECK(u(i, k) == Complex(0.0));
        }
    }
    CHECK(min_hermitian_eigenvalue(h) >= 1.0 - 1e-12);
    // A diagonal input keeps a diagonal factor.
    const auto d = upper_cholesky(ComplexMatrix::diagonal({4.0, 9.0}));
    CHECK(max_abs_diff(d, ComplexMatrix::diagonal({2.0, 3.0})) == 0.0);
}

TEST_CASE("Gaussian-Erf atoms")
{
    const auto g = GaussErfFunction::atom(1.0, GaussErfAtom::gaussian(0, 1.0));
    const auto dg = g.derivative();
    for (double t : {-1.0, 0.4, 2.0}) {
        CHECK(std::abs(dg.eval(t) - Complex(-2.0 * t * std::exp(-t * t))) < 1e-15);
    }
    CHECK(std::abs(GaussErfFunction::atom(1.0, GaussErfAtom::erf(0, 2.0)).eval(0.0)) == 0.0);
    CHECK(std::abs(g.eval(0.0) - Complex(1.0)) == 0.0);
    CHECK(std::abs(GaussErfFunction::atom(2.0, GaussErfAtom::gaussian(1, 1.0)).eval(1.0) - Complex(2.0 / std::exp(1.0)))
          < 1e-15);

    const double b = 3.0;
    const auto erf2 = GaussErfFunction::atom(1.0, GaussErfAtom::erf(0, b)).derivative().derivative();
    for (double t : {-0.8, 0.3, 1.7}) {
        const double expected = 2.0 * std::sqrt(b) / std::sqrt(std::numbers::pi) * (-2.0 * b * t * std::exp(-b * t * t));
        CHECK(std::abs(erf2.eval(t) - Complex(expected)) < 1e-14);
    }
}

TEST_CASE("canonicalization merges atoms and is idempotent")
{
    std::vector<GaussErfTerm> terms{{1.0, GaussErfAtom::gaussian(2, 1.0)},
                                    {2.0, GaussErfAtom::plain(1)},
                                    {-1.0, GaussErfAtom::gaussian(2, 1.0)},
                                    {0.5, GaussErfAtom::erf(0, 2.0)},
                                    {0.5, GaussErfAtom::erf(0, 2.0)}};
    const auto once = canonicalize(terms);
    CHECK(once.size() == 2);
    CHECK(canonicalize(once) == once);
}

TEST_CASE("property: symbolic derivative matches central differences")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_real_distribution<double> scale(0.3, 2.0);
    std::uniform_int_distribution<unsigned> power(0, 3);
    for (int trial = 0; trial < 10; ++trial) {
        GaussErfFunctionMatrix f(2);
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t j = 0; j < 2; ++j) {
                f(i, j) = GaussErfFunction::atom({coef(rng), coef(rng)}, GaussErfAtom::gaussian(power(rng), scale(rng)))
                          + GaussErfFunction::atom({coef(rng), coef(rng)}, GaussErfAtom::erf(power(rng), scale(rng)))
                          + GaussErfFunction::atom(coef(rng), GaussErfAtom::plain(power(rng)));
            }
        }
        const auto df = gauss_erf_derivative(f);
        for (double t : {-2.0, -0.5, 0.7, 3.0}) {
            const double h = 1e-5;
            const auto fd = (gauss_erf_eval(f, t + h) - gauss_erf_eval(f, t - h)) * Complex(1.0 / (2.0 * h));
            const auto exact = gauss_erf_eval(df, t);
            CHECK(max_abs_diff(fd, exact) <= 1e-6 * std::max(1.0, exact.max_abs()));
        }
    }
}

TEST_CASE("products of two Erf atoms are outside the algebra")
{
    const auto e = GaussErfFunction::atom(1.0, GaussErfAtom::erf(0, 1.0));
    CHECK_THROWS_AS(e * e, std::domain_error);
}

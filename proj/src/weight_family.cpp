#include "hermat/weight_family.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hermat {

void validate(const WeightParams& p, CouplingCheck check)
{
    if (p.size < 2) {
        throw std::invalid_argument("size N must be >= 2 (got " + std::to_string(p.size) + ")");
    }
    if (p.a.size() != p.size - 1) {
        throw std::invalid_argument("expected " + std::to_string(p.size - 1) + " coupling parameters a_i, got "
                                    + std::to_string(p.a.size()));
    }
    if (!(p.b > 0.0) || !std::isfinite(p.b)) {
        throw std::invalid_argument("b must be a positive real");
    }
    for (std::size_t i = 0; i < p.a.size(); ++i) {
        if (!std::isfinite(p.a[i].real()) || !std::isfinite(p.a[i].imag())) {
            throw std::invalid_argument("a_" + std::to_string(i + 1) + " is not finite");
        }
        if (check == CouplingCheck::strict && p.a[i] == Complex(0.0, 0.0)) {
            throw std::invalid_argument("a_" + std::to_string(i + 1) + " must be non-zero");
        }
    }
}

std::string describe(const WeightParams& p)
{
    std::ostringstream os;
    os << "N=" << p.size << " b=" << p.b << " a=(";
    for (std::size_t i = 0; i < p.a.size(); ++i) {
        os << (i ? ", " : "") << p.a[i].real();
        if (p.a[i].imag() != 0.0) {
            os << (p.a[i].imag() > 0 ? "+" : "") << p.a[i].imag() << "i";
        }
    }
    os << ")";
    return os.str();
}

WeightValue weight_eval(const StructureMatrices& s, double t)
{
    const auto e = s.exp_acal(t);
    std::vector<Complex> gauss(s.size);
    for (std::size_t k = 0; k < s.size; ++k) {
        gauss[k] = std::exp(s.D(k, k).real() * t * t);
    }
    const auto tm = e * ComplexMatrix::diagonal(gauss);
    return {tm, tm * tm.adjoint()};
}

WeightValue weight_eval(const WeightParams& p, double t) { return weight_eval(build_structure(p), t); }

GaussErfFunctionMatrix weight_function(const StructureMatrices& s)
{
    const std::size_t n = s.size;
    const auto& e = s.exp_acal.coeffs();
    GaussErfFunctionMatrix w(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<GaussErfTerm> terms;
            for (std::size_t l = 0; l < n; ++l) {
                for (std::size_t p = 0; p < e.size(); ++p) {
                    for (std::size_t q = 0; q < e.size(); ++q) {
                        const Complex c = e[p](i, l) * std::conj(e[q](j, l));
                        if (c != Complex(0.0, 0.0)) {
                            terms.push_back(
                                {c, GaussErfAtom::gaussian(static_cast<unsigned>(p + q), s.gauss_scales[l])});
                        }
                    }
                }
            }
            w(i, j) = GaussErfFunction(std::move(terms));
        }
    }
    return w;
}

ComplexMatrix weight_moment(const WeightParams& p, unsigned m)
{
    return weight_moment_as(build_structure(p), m);
}

namespace {

void require_2x2(const WeightParams& p, const char* what)
{
    if (p.size != 2) {
        throw std::invalid_argument(std::string(what) + ": only defined for N = 2");
    }
}

} // namespace

ComplexMatrix weight_inverse_2x2(const WeightParams& p, double t)
{
    require_2x2(p, "weight_inverse_2x2");
    const Complex a = p.a[0];
    const double eb = std::exp(p.b * t * t);
    ComplexMatrix inv(2);
    inv(0, 0) = eb;
    inv(0, 1) = -a * eb * t;
    inv(1, 0) = -std::conj(a) * eb * t;
    inv(1, 1) = std::norm(a) * eb * t * t + std::exp(t * t);
    return inv;
}

GaussErfFunctionMatrix weight_inverse_function_2x2(const WeightParams& p)
{
    require_2x2(p, "weight_inverse_function_2x2");
    const Complex a = p.a[0];
    const double b = p.b;
    GaussErfFunctionMatrix inv(2);
    inv(0, 0) = GaussErfFunction::atom(1.0, GaussErfAtom::gaussian(0, -b));
    inv(0, 1) = GaussErfFunction::atom(-a, GaussErfAtom::gaussian(1, -b));
    inv(1, 0) = GaussErfFunction::atom(-std::conj(a), GaussErfAtom::gaussian(1, -b));
    inv(1, 1) = GaussErfFunction({{std::norm(a), GaussErfAtom::gaussian(2, -b)}, {1.0, GaussErfAtom::gaussian(0, -1.0)}});
    return inv;
}

double LemmaReport::max_residual() const
{
    double best = 0.0;
    for (const auto& id : identities) {
        if (!id.degenerate_skipped) {
            best = std::max(best, id.residual);
        }
    }
    return best;
}

LemmaReport verify_lemma_identities(const WeightParams& p, double t, CouplingCheck check)
{
    const auto s = build_structure(p, check);
    const std::size_t n = s.size;
    const double b = s.b;
    const double nm1 = static_cast<double>(n - 1);
    const double slope = s.psi_slope();
    const auto id = ComplexMatrix::identity(n);
    const auto comm = s.acal_j_commutator();
    const auto a2 = s.A * s.A;

    LemmaReport report;

    {
        ComplexMatrix rhs(n);
        auto odd = s.A;
        for (std::size_t j = 0; j < n / 2; ++j) {
            rhs += odd * Complex(static_cast<double>(2 * j + 1) * s.alphas[j]);
            odd = odd * a2;
        }
        report.identities.push_back({"suma2s", max_abs_diff(comm, rhs)});
    }

    const auto e_plus = s.exp_acal(t);
    const auto e_minus = s.exp_acal(-t);
    {
        const auto f2 = s.Psi + comm * Complex(slope * t);
        report.identities.push_back({"dfe0", max_abs_diff(e_plus * s.Psi, f2 * e_plus)});
    }
    const auto g = e_plus * s.D * e_minus;
    {
        const auto rhs = id * Complex(-b / 2.0) - g * comm * Complex(slope * t);
        report.identities.push_back({"dfe1", max_abs_diff(g * s.Psi, rhs)});
    }
    {
        const auto rhs = id * Complex(-b / 2.0) - comm * g * Complex(slope * t);
        report.identities.push_back({"dfe2", max_abs_diff(s.Psi * g, rhs)});
    }
    if (is_degenerate_b(p)) {
        report.identities.push_back({"suma_2k+1", 0.0, true});
    } else {
        ComplexMatrix sum(n);
        auto even = a2;
        for (std::size_t j = 1; j <= (n - 1) / 2; ++j) {
            const double jj = static_cast<double>(j);
            const double w = s.alphas[j] * std::pow(2.0 * jj, jj) / std::pow(2.0 * jj + 1.0, jj - 1.0);
            sum += even * Complex(w);
            even = even * a2;
        }
        const auto rhs = sum * Complex(2.0 * b * nm1 / (1.0 - b));
        report.identities.push_back({"suma_2k+1", max_abs_diff(s.Acal * comm, rhs)});
    }
    {
        const auto lhs = comm - s.Acal;
        const auto rhs = s.Acal * s.Acal * comm * Complex((1.0 - b) / (2.0 * b * nm1));
        report.identities.push_back({"sumaprinc", max_abs_diff(lhs, rhs)});
    }
    return report;
}

double alpha_product_residual(std::size_t j, std::size_t s, std::size_t size, double b)
{
    const double lhs = alpha_coefficient<double>(s, size, b) * alpha_coefficient<double>(j, size, b);
    const double jj = static_cast<double>(j);
    const double ss = static_cast<double>(s);
    const double k = jj + ss;
    double binom = 1.0;
    for (std::size_t i = 1; i <= s; ++i) {
        binom = binom * static_cast<double>(j + i) / static_cast<double>(i);
    }
    const double rhs = alpha_coefficient<double>(j + s, size, b) * std::pow(2.0 * jj + 1.0, jj - 1.0)
                       * std::pow(2.0 * ss + 1.0, ss - 1.0) / std::pow(2.0 * k + 1.0, k - 1.0) * binom;
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    return scale == 0.0 ? 0.0 : std::abs(lhs - rhs) / scale;
}

namespace {

using LongComplex = std::complex<long double>;

// Integer power with 0^0 = 1; negative exponents invert.
LongComplex ipow(LongComplex base, int exponent)
{
    if (exponent < 0) {
        return LongComplex(1.0L) / ipow(base, -exponent);
    }
    LongComplex out(1.0L);
    for (int i = 0; i < exponent; ++i) {
        out *= base;
    }
    return out;
}

} // namespace

AbelCheck abel_identity_check(unsigned k, Complex z, Complex w)
{
    if (k > 40) {
        throw std::invalid_argument("abel_identity_check: k > 40 exceeds the floating-point binomial range");
    }
    if (w == Complex(0.0, 0.0)) {
        throw std::invalid_argument("abel_identity_check: w must be non-zero");
    }
    const LongComplex zl(z.real(), z.imag());
    const LongComplex wl(w.real(), w.imag());
    const int kk = static_cast<int>(k);
    LongComplex lhs(0.0L);
    long double binom = 1.0L;
    for (int m = 0; m <= kk; ++m) {
        if (m > 0) {
            binom = binom * static_cast<long double>(kk - m + 1) / static_cast<long double>(m);
        }
        lhs += binom * ipow(static_cast<long double>(m) + zl, m)
               * ipow(static_cast<long double>(kk - m) + wl, kk - m - 1);
    }
    const LongComplex rhs = ipow(zl + wl + static_cast<long double>(kk), kk) / wl;
    const long double denom = std::abs(rhs);
    const long double diff = std::abs(lhs - rhs);
    AbelCheck out;
    out.lhs = Complex(static_cast<double>(lhs.real()), static_cast<double>(lhs.imag()));
    out.rhs = Complex(static_cast<double>(rhs.real()), static_cast<double>(rhs.imag()));
    out.relative_residual = static_cast<double>(denom == 0.0L ? diff : diff / denom);
    return out;
}

} // namespace hermat

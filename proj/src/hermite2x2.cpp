#include "hermat/hermite2x2.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace hermat {

namespace {

void require_2x2(const WeightParams& p, const char* what)
{
    validate(p);
    if (p.size != 2) {
        throw std::invalid_argument(std::string(what) + ": requires N = 2 (got N = " + std::to_string(p.size) + ")");
    }
}

ComplexMatrix diag2(Complex x, Complex y) { return ComplexMatrix::diagonal({x, y}); }

ComplexMatrix mat2(Complex m00, Complex m01, Complex m10, Complex m11) { return ComplexMatrix(2, {m00, m01, m10, m11}); }

std::vector<double> hermite_coefficients(unsigned n)
{
    std::vector<double> prev{1.0};
    if (n == 0) {
        return prev;
    }
    std::vector<double> cur{0.0, 2.0};
    for (unsigned k = 1; k < n; ++k) {
        std::vector<double> next(k + 2, 0.0);
        for (std::size_t j = 0; j < cur.size(); ++j) {
            next[j + 1] += 2.0 * cur[j];
        }
        for (std::size_t j = 0; j < prev.size(); ++j) {
            next[j] -= 2.0 * static_cast<double>(k) * prev[j];
        }
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

double log_factorial(unsigned n) { return std::lgamma(static_cast<double>(n) + 1.0); }

const double log_sqrt_pi = 0.5 * std::log(std::numbers::pi);

// Relative deviation of two matrices on the scale of the larger one.
double relative_gap(const ComplexMatrix& x, const ComplexMatrix& y)
{
    const double scale = std::max({x.max_abs(), y.max_abs(), 1e-300});
    return max_abs_diff(x, y) / scale;
}

} // namespace

double hermite_eval(unsigned n, double x)
{
    if (n > 200) {
        throw std::invalid_argument("hermite_eval: n > 200 is outside the supported range");
    }
    double prev = 1.0;
    if (n == 0) {
        return prev;
    }
    double cur = 2.0 * x;
    for (unsigned k = 1; k < n; ++k) {
        const double next = 2.0 * x * cur - 2.0 * static_cast<double>(k) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

std::vector<double> scaled_hermite_coefficients(unsigned n, double s)
{
    static std::mutex mutex;
    static std::map<std::pair<unsigned, double>, std::vector<double>> cache;
    const auto key = std::make_pair(n, s);
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) {
            return it->second;
        }
    }
    auto c = hermite_coefficients(n);
    double power = 1.0;
    for (auto& x : c) {
        x *= power;
        power *= s;
    }
    std::lock_guard lock(mutex);
    return cache.emplace(key, std::move(c)).first->second;
}

double gamma_n(const WeightParams& p, long n)
{
    const double a2 = std::norm(p.a.at(0));
    return 2.0 + a2 * std::pow(p.b, static_cast<double>(n) - 0.5) * static_cast<double>(n);
}

double log_gamma_n(const WeightParams& p, long n)
{
    const double a2 = std::norm(p.a.at(0));
    if (n == 0 || a2 == 0.0) {
        return std::log(2.0);
    }
    if (n < 0) {
        const double g = gamma_n(p, n);
        if (!(g > 0.0)) {
            throw std::domain_error("log_gamma_n: gamma_" + std::to_string(n) + " is not positive");
        }
        return std::log(g);
    }
    // gamma = 2 + e^x
    const double x = std::log(a2 * static_cast<double>(n)) + (static_cast<double>(n) - 0.5) * std::log(p.b);
    if (x < std::log(2.0)) {
        return std::log(2.0) + std::log1p(0.5 * std::exp(x));
    }
    return x + std::log1p(2.0 * std::exp(-x));
}

namespace {

// log(gamma_m / gamma_n) without routing the small |a|^2 tails through ln 2.
double log_gamma_ratio(const WeightParams& p, long m, long n)
{
    const double a2 = std::norm(p.a.at(0));
    auto tail_x = [&](long k) {
        return std::log(a2 * static_cast<double>(k)) + (static_cast<double>(k) - 0.5) * std::log(p.b);
    };
    auto small = [&](long k) { return k == 0 || a2 == 0.0 || (k > 0 && tail_x(k) < std::log(2.0)); };
    if (m >= 0 && n >= 0 && small(m) && small(n)) {
        const double tm = (m == 0 || a2 == 0.0) ? 0.0 : std::log1p(0.5 * std::exp(tail_x(m)));
        const double tn = (n == 0 || a2 == 0.0) ? 0.0 : std::log1p(0.5 * std::exp(tail_x(n)));
        return tm - tn;
    }
    return log_gamma_n(p, m) - log_gamma_n(p, n);
}

} // namespace

MatrixPolynomial explicit_Pn(const WeightParams& p, unsigned n)
{
    require_2x2(p, "explicit_Pn");
    if (n == 0) {
        return MatrixPolynomial::constant(diag2(1.0, 2.0));
    }
    const Complex a = p.a[0];
    const double b = p.b;
    const double a2 = std::norm(a);
    const double nn = static_cast<double>(n);
    const auto hb = scaled_hermite_coefficients(n, std::sqrt(b));
    const auto hb1 = scaled_hermite_coefficients(n - 1, std::sqrt(b));
    const auto h = scaled_hermite_coefficients(n, 1.0);
    const auto h1 = scaled_hermite_coefficients(n + 1, 1.0);

    MatrixPolynomial out(2);
    for (unsigned k = 0; k <= n; ++k) {
        // b^{-n/2} H_n(sqrt(b) t) has t^k coefficient hermite_k b^{(k-n)/2}.
        const double top = hb[k] * std::pow(b, -nn / 2.0);
        out.coeff_ref(k)(0, 0) += top;
        out.coeff_ref(k + 1)(0, 1) += -a * top;
        out.coeff_ref(k)(1, 1) += 2.0 * h[k];
    }
    for (unsigned k = 0; k <= n + 1; ++k) {
        out.coeff_ref(k)(0, 1) += 0.5 * a * h1[k];
    }
    // The t^{n+1} terms of the (0, 1) entry cancel exactly.
    out.coeff_ref(n + 1)(0, 1) = 0.0;
    for (unsigned k = 0; k < n; ++k) {
        const double lower = hb1[k] * std::pow(b, nn / 2.0) * nn;
        out.coeff_ref(k)(1, 0) += -2.0 * std::conj(a) * lower;
        out.coeff_ref(k + 1)(1, 1) += 2.0 * a2 * lower;
    }
    return out.trimmed();
}

GaussErfFunctionMatrix rodrigues_Rn(const WeightParams& p, unsigned n)
{
    require_2x2(p, "rodrigues_Rn");
    if (n == 0) {
        throw std::invalid_argument("rodrigues_Rn: n must be >= 1");
    }
    const Complex a = p.a[0];
    const double b = p.b;
    const double a2 = std::norm(a);
    const double nn = static_cast<double>(n);
    const double sign = n % 2 == 0 ? 1.0 : -1.0;
    const double sqrt_pi = std::sqrt(std::numbers::pi);

    GaussErfFunctionMatrix r(2);
    r(0, 0) = GaussErfFunction({{sign * std::pow(b, -nn), GaussErfAtom::gaussian(0, b)},
                                {sign * a2 * nn / 2.0, GaussErfAtom::gaussian(0, 1.0)},
                                {sign * a2, GaussErfAtom::gaussian(2, 1.0)}});
    r(0, 1) = GaussErfFunction::atom(sign * a, GaussErfAtom::gaussian(1, 1.0));
    const Complex ab = sign * std::conj(a);
    r(1, 0) = GaussErfFunction({{2.0 * ab, GaussErfAtom::gaussian(1, 1.0)},
                                {ab * sqrt_pi * nn, GaussErfAtom::erf(0, b)},
                                {-ab * sqrt_pi * nn, GaussErfAtom::erf(0, 1.0)}});
    r(1, 1) = GaussErfFunction::atom(2.0 * sign, GaussErfAtom::gaussian(0, 1.0));
    return r;
}

namespace {

struct RodriguesProduct {
    GaussErfFunctionMatrix product;
    double defect = 0.0;
};

RodriguesProduct rodrigues_product(const WeightParams& p, unsigned n)
{
    const auto d = rodrigues_Rn(p, n).derivative(n);
    const auto inv = weight_inverse_function_2x2(p);
    RodriguesProduct out{d * inv, 0.0};
    const double scale = std::max(d.max_coeff() * inv.max_coeff(), out.product.max_coeff());
    out.defect = scale > 0.0 ? out.product.max_transcendental_coeff() / scale : 0.0;
    return out;
}

} // namespace

double rodrigues_cancellation_defect(const WeightParams& p, unsigned n) { return rodrigues_product(p, n).defect; }

MatrixPolynomial rodrigues_polynomial(const WeightParams& p, unsigned n, double cancellation_tol)
{
    const auto r = rodrigues_product(p, n);
    if (r.defect > cancellation_tol) {
        throw std::runtime_error("rodrigues_polynomial: transcendental atoms survive multiplication by W^{-1} (relative "
                                 + std::to_string(r.defect) + ")");
    }
    return r.product.polynomial_part().trimmed();
}

NormalizationFactors normalization_factors(const WeightParams& p, unsigned n)
{
    require_2x2(p, "normalization_factors");
    const double b = p.b;
    const double nn = static_cast<double>(n);
    NormalizationFactors f;
    f.n = n;
    f.gamma = gamma_n(p, n);
    const double lg = log_gamma_n(p, n);
    const double lg1 = log_gamma_n(p, n + 1);

    double scale = 0.0;
    double top = 0.0;
    double two_n = 0.0;
    if (n <= 30) {
        scale = std::sqrt(std::pow(2.0, nn) / (std::sqrt(std::numbers::pi) * std::tgamma(nn + 1.0)));
        top = std::sqrt(2.0 * std::pow(b, nn + 0.5) / gamma_n(p, n + 1));
        two_n = std::pow(2.0, nn);
    } else {
        scale = std::exp(0.5 * (nn * std::log(2.0) - log_sqrt_pi - log_factorial(n)));
        top = std::exp(0.5 * (std::log(2.0) + (nn + 0.5) * std::log(b) - lg1));
        two_n = std::exp(nn * std::log(2.0));
    }
    const double bottom = std::exp(0.5 * (lg - std::log(2.0)));
    f.Gamma = diag2(two_n, two_n * f.gamma);
    f.Delta = diag2(scale * top, scale * bottom);
    f.G = diag2(f.Gamma(0, 0) / f.Delta(0, 0), f.Gamma(1, 1) / f.Delta(1, 1));
    return f;
}

OrthonormalCoefficients orthonormal_recurrence(const WeightParams& p, unsigned n)
{
    require_2x2(p, "orthonormal_recurrence");
    const Complex a = p.a[0];
    const double b = p.b;
    const double nn = static_cast<double>(n);
    const double lb = std::log(b);
    const long ln = static_cast<long>(n);
    OrthonormalCoefficients c;
    c.A = ComplexMatrix(2);
    if (n >= 1) {
        c.A = diag2(std::sqrt(nn) * std::exp(0.5 * (log_gamma_ratio(p, ln + 1, ln) - std::log(2.0 * b))),
                    std::sqrt(nn) * std::exp(0.5 * (log_gamma_ratio(p, ln - 1, ln) - std::log(2.0))));
    }
    const double factor = std::exp((2.0 * nn - 3.0) / 4.0 * lb - 0.5 * (log_gamma_n(p, ln) + log_gamma_n(p, ln + 1)))
                          * (b + (b - 1.0) * nn);
    c.B = mat2(0.0, factor * a, factor * std::conj(a), 0.0);
    return c;
}

MonicNormalizedCoefficients monic_and_normalized_recurrence(const WeightParams& p, unsigned n)
{
    require_2x2(p, "monic_and_normalized_recurrence");
    const Complex a = p.a[0];
    const Complex ab = std::conj(a);
    const double b = p.b;
    const double nn = static_cast<double>(n);
    const double lb = std::log(b);
    const long ln = static_cast<long>(n);
    const double lg = log_gamma_n(p, ln);
    const double lg1 = log_gamma_n(p, ln + 1);

    MonicNormalizedCoefficients m;
    const double shift = b + (b - 1.0) * nn;
    m.B_hat = mat2(0.0, shift * a / (2.0 * b), shift * 2.0 * ab * std::exp((nn - 0.5) * lb - lg - lg1), 0.0);
    const double tilde = -nn + (nn + 1.0) * b;
    m.B_tilde = mat2(0.0, tilde * a / (2.0 * b * std::exp(lg)), tilde * 2.0 * ab * std::exp((nn - 0.5) * lb - lg1),
                     0.0);
    m.C_hat = ComplexMatrix(2);
    m.A_tilde = ComplexMatrix(2);
    m.C_tilde = ComplexMatrix(2);
    if (n >= 1) {
        m.C_hat = diag2(nn / (2.0 * b) * std::exp(log_gamma_ratio(p, ln + 1, ln)), nn / 2.0 * std::exp(log_gamma_ratio(p, ln - 1, ln)));
        m.A_tilde = diag2(0.5, 0.5 * std::exp(log_gamma_ratio(p, ln - 1, ln)));
        m.C_tilde = diag2(nn * std::exp(log_gamma_ratio(p, ln + 1, ln)) / b, nn);
    }

    // Cross-check against the orthonormal closed forms through G_n and Delta_n.
    const auto fn = normalization_factors(p, n);
    const auto on = orthonormal_recurrence(p, n);
    m.consistency = relative_gap(m.B_tilde, fn.G * on.B * inverse(fn.G));
    m.consistency = std::max(m.consistency, relative_gap(m.B_hat, inverse(fn.Delta) * on.B * fn.Delta));
    if (n >= 1) {
        const auto fp = normalization_factors(p, n - 1);
        m.consistency = std::max(m.consistency, relative_gap(m.A_tilde, fp.G * on.A * inverse(fn.G)));
        m.consistency = std::max(m.consistency, relative_gap(m.C_tilde, fn.G * on.A.adjoint() * inverse(fp.G)));
        m.consistency = std::max(m.consistency,
                                 relative_gap(m.C_hat, inverse(fn.Delta) * on.A.adjoint() * fp.Delta));
    }
    return m;
}

NormPair norms(const WeightParams& p, unsigned n)
{
    require_2x2(p, "norms");
    const double b = p.b;
    const double nn = static_cast<double>(n);
    const long ln = static_cast<long>(n);
    const double lg = log_gamma_n(p, ln);
    const double lg1 = log_gamma_n(p, ln + 1);
    NormPair out;
    if (n <= 30) {
        const double fact = std::tgamma(nn + 1.0);
        const double sp = std::sqrt(std::numbers::pi);
        const double two_n = std::pow(2.0, nn);
        const double first = gamma_n(p, ln + 1) / (2.0 * std::pow(b, nn + 0.5));
        const double g = gamma_n(p, ln);
        out.monic = diag2(sp * fact / two_n * first, sp * fact / two_n * 2.0 / g);
        out.rodrigues = diag2(two_n * sp * fact * first, two_n * sp * fact * 2.0 * g);
        return out;
    }
    const double l2 = std::log(2.0);
    const double base = log_sqrt_pi + log_factorial(n);
    const double first = lg1 - l2 - (nn + 0.5) * std::log(b);
    out.monic = diag2(std::exp(base - nn * l2 + first), std::exp(base - nn * l2 + l2 - lg));
    out.rodrigues = diag2(std::exp(base + nn * l2 + first), std::exp(base + nn * l2 + l2 + lg));
    return out;
}

AsymptoticReport asymptotic_limit(const WeightParams& p, unsigned horizon)
{
    require_2x2(p, "asymptotic_limit");
    const double b = p.b;
    if (b == 1.0) {
        throw std::invalid_argument("asymptotic_limit: no limit is stated for b = 1");
    }
    AsymptoticReport r;
    const double l0 = b > 1.0 ? 1.0 / std::sqrt(2.0) : 1.0 / std::sqrt(2.0 * b);
    const double l1 = b > 1.0 ? 1.0 / std::sqrt(2.0 * b) : 1.0 / std::sqrt(2.0);
    r.limit = diag2(l0, l1);
    r.error.assign(horizon + 1, 0.0);
    for (unsigned n = 1; n <= horizon; ++n) {
        const long ln = static_cast<long>(n);
        // log(A_n(k,k) / sqrt(n)) - log L_kk; the ln 2 and ln b parts cancel in closed form.
        const double up = log_gamma_ratio(p, ln + 1, ln);
        const double down = log_gamma_ratio(p, ln - 1, ln);
        const double r0 = b > 1.0 ? 0.5 * (up - std::log(b)) : 0.5 * up;
        const double r1 = b > 1.0 ? 0.5 * (down + std::log(b)) : 0.5 * down;
        r.error[n] = std::max(l0 * std::abs(std::expm1(r0)), l1 * std::abs(std::expm1(r1)));
    }
    return r;
}

RodriguesPdeReport verify_rodrigues_pde(const WeightParams& p, unsigned n, const std::vector<double>& ts)
{
    require_2x2(p, "verify_rodrigues_pde");
    const auto op = build_operator(p);
    const auto lambda = eigenvalue_matrix(p, n);
    const double nn = static_cast<double>(n);
    const Complex choose2(nn * (nn - 1.0) / 2.0);

    const auto f2s = op.F2.adjoint();
    const auto f1s = op.F1.adjoint();
    const auto f0s = op.F0.adjoint();
    const auto m2 = f2s;
    const auto m1 = f1s + Complex(nn) * f2s.derivative(1);
    const auto m0 = f0s + Complex(nn) * f1s.derivative(1) + choose2 * f2s.derivative(2);

    const auto r = rodrigues_Rn(p, n);
    using F = GaussErfFunctionMatrix;
    const auto lhs = (r * F::from_polynomial(m2)).derivative(2) - (r * F::from_polynomial(m1)).derivative(1)
                     + r * F::from_polynomial(m0);
    const auto defect = lhs - F::from_matrix(lambda) * r;

    RodriguesPdeReport out;
    for (double t : ts) {
        out.residual = std::max(out.residual, defect.eval(t).max_abs());
    }

    // The 2x2 display: M2 = [[1, 0], [conj(a)(b-1)t, b]], M1 = [[-2bt, 0], [conj(a)(b(2+n)-n), -2bt]], M0 = Lambda_n.
    const Complex ab = std::conj(p.a[0]);
    const double b = p.b;
    const auto d2 = MatrixPolynomial::linear(diag2(1.0, b), mat2(0.0, 0.0, ab * (b - 1.0), 0.0));
    const auto d1 = MatrixPolynomial::linear(mat2(0.0, 0.0, ab * (b * (2.0 + nn) - nn), 0.0), diag2(-2.0 * b, -2.0 * b));
    const auto d0 = MatrixPolynomial::constant(lambda);
    out.display_mismatch = std::max({max_coeff_diff(d2, m2), max_coeff_diff(d1, m1), max_coeff_diff(d0, m0)});
    return out;
}

} // namespace hermat

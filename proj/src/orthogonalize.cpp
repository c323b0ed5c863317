#include "hermat/orthogonalize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

namespace hermat {

namespace {

using Q = QuadComplex;
using R = QuadReal;

// <P, t^k I> = int P W t^k dt = sum_j P_j M_{j+k}, for k = 0 .. kmax.
std::vector<QuadMatrix> monomial_projections(const MomentTable<Q>& moments, const QuadMatrixPolynomial& p,
                                             std::size_t kmax)
{
    std::vector<QuadMatrix> out(kmax + 1, QuadMatrix(p.dim()));
    for (std::size_t k = 0; k <= kmax; ++k) {
        for (std::size_t j = 0; j < p.size(); ++j) {
            if (!p.coeffs()[j].is_zero()) {
                out[k] += p.coeffs()[j] * moments.get(static_cast<unsigned>(j + k));
            }
        }
    }
    return out;
}

// <P, Q> from the monomial projections of P.
QuadMatrix inner_from_projections(const std::vector<QuadMatrix>& proj, const QuadMatrixPolynomial& q)
{
    QuadMatrix out(q.dim());
    for (std::size_t k = 0; k < q.size(); ++k) {
        out += proj[k] * q.coeffs()[k].adjoint();
    }
    return out;
}

double to_double(const R& x) { return static_cast<double>(x); }

ComplexMatrix to_complex(const QuadMatrix& m) { return convert_matrix<Complex>(m); }

// Cancellation ratio of the moment evaluation of |P|^2:
// (sum_{j,k} |P_j| |M_{j+k}| |P_k|) |N^{-1}|, using entrywise max norms.
// The relative error of the computed norm is about epsilon times this.
double cancellation_ratio(const MomentTable<Q>& moments, const QuadMatrixPolynomial& p, const QuadMatrix& norm_inverse)
{
    const double dim = static_cast<double>(p.dim());
    std::vector<double> c;
    for (const auto& m : p.coeffs()) {
        c.push_back(to_double(m.max_abs()) * dim);
    }
    double total = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
        for (std::size_t k = 0; k < c.size(); ++k) {
            total += c[j] * c[k] * to_double(moments.get(static_cast<unsigned>(j + k)).max_abs()) * dim;
        }
    }
    return total * to_double(norm_inverse.max_abs()) * dim;
}

} // namespace

MonicSequence monic_sequence(const WeightParams& p, std::size_t nmax, const OrthogonalizeOptions& opts)
{
    const MomentTable<Q> moments(build_structure_as<Q>(p));
    const std::size_t n = p.size;

    auto quad = std::make_shared<QuadSequence>();
    MonicSequence out;
    out.params = p;

    std::vector<QuadMatrix> norm_inv;

    auto accept = [&](QuadMatrixPolynomial poly, std::size_t degree) -> bool {
        const auto proj = monomial_projections(moments, poly, degree);
        auto norm = inner_from_projections(proj, poly);
        // Symmetrize: rounding leaves a tiny anti-Hermitian part.
        norm = (norm + norm.adjoint()) * Q(R(0.5));
        const auto norm_d = to_complex(norm);
        if (!(min_hermitian_eigenvalue(norm_d) > 0.0)) {
            std::ostringstream os;
            os << "norm of degree " << degree << " is not positive definite; sequence truncated at degree "
               << degree - 1;
            out.diagnostic = os.str();
            return false;
        }
        QuadMatrix inv = inverse(norm);
        const double cond = cancellation_ratio(moments, poly, inv);
        // P_0 = I involves no cancellation, so the guard starts at degree 1.
        if (degree > 0 && !(cond <= opts.max_condition)) {
            std::ostringstream os;
            os << "moment cancellation ratio " << cond << " exceeds " << opts.max_condition
               << " at degree " << degree << "; sequence truncated at degree " << degree - 1;
            out.diagnostic = os.str();
            return false;
        }
        out.condition.push_back(cond);
        out.polys.push_back(convert_polynomial<Complex>(poly));
        out.norms.push_back(norm_d);
        quad->polys.push_back(std::move(poly));
        quad->norms.push_back(std::move(norm));
        norm_inv.push_back(std::move(inv));
        return true;
    };

    bool ok = accept(QuadMatrixPolynomial::constant(QuadMatrix::identity(n)), 0);
    for (std::size_t deg = 1; ok && deg <= nmax; ++deg) {
        auto cand = quad->polys.back().times_t();
        const int passes = opts.refine ? 2 : 1;
        for (int pass = 0; pass < passes; ++pass) {
            const auto proj = monomial_projections(moments, cand, deg - 1);
            for (std::size_t k = 0; k < deg; ++k) {
                const auto coeff = inner_from_projections(proj, quad->polys[k]) * norm_inv[k];
                if (!coeff.is_zero()) {
                    cand -= coeff * quad->polys[k];
                }
            }
        }
        // Leading coefficient is I by construction; pin it exactly.
        cand.coeff_ref(deg) = QuadMatrix::identity(n);
        ok = accept(std::move(cand), deg);
    }
    if (out.polys.empty()) {
        throw std::domain_error("monic_sequence: zeroth moment is not positive definite");
    }
    out.truncated = out.polys.size() < nmax + 1;
    out.quad = std::move(quad);
    return out;
}

double orthogonality_defect(const MonicSequence& s)
{
    if (!s.quad) {
        return 0.0;
    }
    const MomentTable<Q> moments(build_structure_as<Q>(s.params));
    const auto& q = *s.quad;
    double worst = 0.0;
    for (std::size_t n = 1; n < q.polys.size(); ++n) {
        const auto proj = monomial_projections(moments, q.polys[n], n);
        const double nn = to_double(q.norms[n].max_abs());
        for (std::size_t m = 0; m < n; ++m) {
            const double scale = std::sqrt(nn * to_double(q.norms[m].max_abs()));
            worst = std::max(worst, to_double(inner_from_projections(proj, q.polys[m]).max_abs()) / scale);
        }
    }
    return worst;
}

const char* to_string(RecurrenceKind k)
{
    switch (k) {
    case RecurrenceKind::orthonormal:
        return "orthonormal";
    case RecurrenceKind::monic:
        return "monic";
    case RecurrenceKind::rodrigues_normalized:
        return "rodrigues-normalized";
    }
    return "unknown";
}

double RecurrenceTable::max_residual() const
{
    return residual.empty() ? 0.0 : *std::max_element(residual.begin(), residual.end());
}

namespace {

struct QuadMonic {
    std::vector<QuadMatrix> B;
    std::vector<QuadMatrix> C;
};

QuadMonic quad_monic_coefficients(const QuadSequence& q)
{
    const std::size_t L = q.polys.size() - 1;
    const std::size_t n = q.polys.front().dim();
    QuadMonic out;
    for (std::size_t k = 0; k < L; ++k) {
        QuadMatrix b = q.polys[k + 1].coeff(k) * Q(R(-1));
        if (k > 0) {
            b += q.polys[k].coeff(k - 1);
        }
        out.B.push_back(b);
        out.C.push_back(k == 0 ? QuadMatrix(n) : q.norms[k] * inverse(q.norms[k - 1]));
    }
    return out;
}

} // namespace

RecurrenceTable recurrence_from_sequence(const MonicSequence& s)
{
    if (s.polys.size() < 2 || !s.quad) {
        throw std::invalid_argument("recurrence_from_sequence: need at least two polynomials");
    }
    const auto& q = *s.quad;
    const std::size_t L = q.polys.size() - 1;
    const std::size_t n = s.params.size;
    const auto mono = quad_monic_coefficients(q);

    RecurrenceTable t;
    t.kind = RecurrenceKind::monic;
    t.A.assign(L + 1, ComplexMatrix::identity(n));
    t.A[0] = ComplexMatrix(n);
    for (std::size_t k = 0; k < L; ++k) {
        t.B.push_back(to_complex(mono.B[k]));
        t.C.push_back(to_complex(mono.C[k]));
        auto defect = q.polys[k].times_t() - q.polys[k + 1] - mono.B[k] * q.polys[k];
        if (k > 0) {
            defect -= mono.C[k] * q.polys[k - 1];
        }
        t.residual.push_back(to_double(defect.max_coeff_abs() / std::max<R>(R(1), q.polys[k].max_coeff_abs())));
    }
    return t;
}

OrthonormalData orthonormalize_sequence(const MonicSequence& s)
{
    if (!s.quad || s.polys.empty()) {
        throw std::invalid_argument("orthonormalize_sequence: empty sequence");
    }
    const auto& q = *s.quad;
    const std::size_t L = q.polys.size() - 1;
    const std::size_t n = s.params.size;

    std::vector<QuadMatrix> delta;
    std::vector<QuadMatrix> delta_inv;
    std::vector<QuadMatrixPolynomial> polys;
    for (std::size_t k = 0; k <= L; ++k) {
        const auto u = upper_cholesky(q.norms[k]);
        delta.push_back(inverse(u));
        delta_inv.push_back(u);
        polys.push_back(delta.back() * q.polys[k]);
    }

    OrthonormalData out;
    auto& t = out.table;
    t.kind = RecurrenceKind::orthonormal;
    t.A.assign(L + 1, ComplexMatrix(n));
    std::vector<QuadMatrix> a_quad(L + 1, QuadMatrix(n));
    for (std::size_t k = 1; k <= L; ++k) {
        a_quad[k] = delta[k - 1] * delta_inv[k];
        t.A[k] = to_complex(a_quad[k]);
    }
    const auto mono = L > 0 ? quad_monic_coefficients(q) : QuadMonic{};
    for (std::size_t k = 0; k < L; ++k) {
        const QuadMatrix b = delta[k] * mono.B[k] * delta_inv[k];
        const QuadMatrix c = k == 0 ? QuadMatrix(n) : a_quad[k].adjoint();
        if (k > 0) {
            const QuadMatrix c_direct = delta[k] * mono.C[k] * delta_inv[k - 1];
            out.c_adjoint_defect = std::max(out.c_adjoint_defect, to_double(max_abs_diff(c_direct, c)));
        }
        out.b_hermitian_defect = std::max(out.b_hermitian_defect, to_double(hermitian_defect(b)));
        t.B.push_back(to_complex(b));
        t.C.push_back(to_complex(c));
        auto defect = polys[k].times_t() - a_quad[k + 1] * polys[k + 1] - b * polys[k];
        if (k > 0) {
            defect -= c * polys[k - 1];
        }
        t.residual.push_back(to_double(defect.max_coeff_abs() / std::max<R>(R(1), polys[k].max_coeff_abs())));
    }
    for (std::size_t k = 0; k <= L; ++k) {
        out.delta.push_back(to_complex(delta[k]));
        out.polys.push_back(convert_polynomial<Complex>(polys[k]));
    }
    return out;
}

GaussHermiteRule gauss_hermite_rule(std::size_t points)
{
    if (points == 0) {
        throw std::invalid_argument("gauss_hermite_rule: need at least one point");
    }
    const auto m = static_cast<Eigen::Index>(points);
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index k = 1; k < m; ++k) {
        const double off = std::sqrt(static_cast<double>(k) / 2.0);
        jacobi(k, k - 1) = off;
        jacobi(k - 1, k) = off;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi, Eigen::EigenvaluesOnly);

    // Orthonormal Hermite values h_0 .. h_{points} at x (weight e^{-x^2}).
    auto orthonormal = [points](double x, std::vector<double>& h) {
        h.assign(points + 1, 0.0);
        h[0] = std::pow(std::numbers::pi, -0.25);
        if (points >= 1) {
            h[1] = std::sqrt(2.0) * x * h[0];
        }
        for (std::size_t k = 1; k < points; ++k) {
            const double kk = static_cast<double>(k);
            h[k + 1] = std::sqrt(2.0 / (kk + 1.0)) * x * h[k] - std::sqrt(kk / (kk + 1.0)) * h[k - 1];
        }
    };

    GaussHermiteRule rule;
    std::vector<double> h;
    for (Eigen::Index i = 0; i < m; ++i) {
        double x = solver.eigenvalues()(i);
        for (int it = 0; it < 3; ++it) {
            orthonormal(x, h);
            // h_M' = sqrt(2M) h_{M-1}
            const double deriv = std::sqrt(2.0 * static_cast<double>(points)) * h[points - 1];
            if (deriv == 0.0) {
                break;
            }
            x -= h[points] / deriv;
        }
        orthonormal(x, h);
        double christoffel = 0.0;
        for (std::size_t k = 0; k < points; ++k) {
            christoffel += h[k] * h[k];
        }
        rule.nodes.push_back(x);
        rule.weights.push_back(1.0 / christoffel);
    }
    // Enforce the exact +-x symmetry of the rule so that odd integrands cancel exactly.
    for (std::size_t i = 0, j = points - 1; i < j; ++i, --j) {
        const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
        const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
        rule.nodes[i] = -x;
        rule.nodes[j] = x;
        rule.weights[i] = w;
        rule.weights[j] = w;
    }
    if (points % 2 == 1) {
        rule.nodes[points / 2] = 0.0;
    }
    return rule;
}

ComplexMatrix gauss_hermite_integrate(const std::function<ComplexMatrix(double)>& f, double c,
                                      const GaussHermiteRule& rule)
{
    if (!(c > 0.0)) {
        throw std::invalid_argument("gauss_hermite_integrate: Gaussian rate must be positive");
    }
    const double root = std::sqrt(c);
    const auto& x = rule.nodes;
    const auto& w = rule.weights;
    const std::size_t m = x.size();
    bool symmetric = m > 0;
    for (std::size_t i = 0; i < m && symmetric; ++i) {
        symmetric = x[i] == -x[m - 1 - i] && w[i] == w[m - 1 - i];
    }
    ComplexMatrix acc;
    auto add = [&acc](ComplexMatrix v) {
        if (acc.dim() == 0) {
            acc = std::move(v);
        } else {
            acc += v;
        }
    };
    if (symmetric) {
        // Pairing f(x) + f(-x) before scaling leaves odd parts exactly zero.
        for (std::size_t i = 0; i < m / 2; ++i) {
            add((f(x[i] / root) + f(x[m - 1 - i] / root)) * Complex(w[i] / root));
        }
        if (m % 2 == 1) {
            add(f(x[m / 2] / root) * Complex(w[m / 2] / root));
        }
    } else {
        for (std::size_t i = 0; i < m; ++i) {
            add(f(x[i] / root) * Complex(w[i] / root));
        }
    }
    return acc;
}

namespace {

ComplexMatrix oracle_pass(const StructureMatrices& s, const MatrixFunction& left, const MatrixFunction& right,
                          const GaussHermiteRule& rule)
{
    const std::size_t n = s.size;
    ComplexMatrix total(n);
    for (std::size_t k = 0; k < n; ++k) {
        auto component = [&](double t) {
            const auto e = s.exp_acal(t);
            ComplexMatrix vv(n);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    vv(i, j) = e(i, k) * std::conj(e(j, k));
                }
            }
            return left(t) * vv * right(t).adjoint();
        };
        total += gauss_hermite_integrate(component, s.gauss_scales[k], rule);
    }
    return total;
}

} // namespace

OracleResult quadrature_oracle(const WeightParams& p, const MatrixFunction& left, const MatrixFunction& right,
                               std::size_t degree_hint)
{
    const auto s = build_structure(p);
    // Integrand degree: hint plus 2(N-1) from the columns of e^{Acal t}.
    const std::size_t degree = degree_hint + 2 * (s.size - 1);
    const std::size_t points = std::max<std::size_t>(degree / 2 + 8, degree_hint);
    OracleResult r;
    r.points = points;
    r.value = oracle_pass(s, left, right, gauss_hermite_rule(points));
    const auto refined = oracle_pass(s, left, right, gauss_hermite_rule(2 * points));
    r.delta = max_abs_diff(r.value, refined);
    return r;
}

OracleResult quadrature_oracle(const WeightParams& p, const MatrixFunction& integrand_left, std::size_t degree_hint)
{
    const std::size_t n = p.size;
    return quadrature_oracle(
        p, integrand_left, [n](double) { return ComplexMatrix::identity(n); }, degree_hint);
}

OracleAgreement oracle_moment_agreement(const WeightParams& p, unsigned mmax)
{
    const auto s = build_structure(p);
    const MomentTable<Complex> moments(s);
    const std::size_t n = p.size;
    OracleAgreement out;
    for (unsigned m = 0; m <= mmax; ++m) {
        const auto exact = moments.get(m);
        const auto oracle = quadrature_oracle(
            p, [m, n](double t) { return ComplexMatrix::identity(n) * Complex(std::pow(t, static_cast<double>(m))); },
            m);
        const double scale = exact.max_abs();
        out.max_relative = std::max(out.max_relative, max_abs_diff(oracle.value, exact) / scale);
        out.max_delta = std::max(out.max_delta, oracle.delta / scale);
    }
    return out;
}

} // namespace hermat

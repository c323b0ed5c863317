#include "hermat/differential_operator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hermat {

DifferentialOperator build_operator(const StructureMatrices& s)
{
    const std::size_t n = s.size;
    const Complex c(s.psi_slope());
    const Complex b(s.b);
    const auto comm = s.acal_j_commutator();
    const auto id = ComplexMatrix::identity(n);

    DifferentialOperator d;
    d.F2 = MatrixPolynomial::linear(s.Psi, comm * c);
    d.F1 = MatrixPolynomial::linear(s.Acal * s.Psi * Complex(2.0),
                                    (id * (-b) + s.Acal * comm * c) * Complex(2.0));
    d.F0 = MatrixPolynomial::constant(s.J * (Complex(2.0) * b) + s.Acal * s.Acal * s.Psi);
    return d;
}

DifferentialOperator build_operator(const WeightParams& p) { return build_operator(build_structure(p)); }

MatrixPolynomial apply_operator(const DifferentialOperator& d, const MatrixPolynomial& p)
{
    if (p.dim() != d.dim()) {
        throw std::invalid_argument("apply_operator: polynomial dimension " + std::to_string(p.dim())
                                    + " does not match operator dimension " + std::to_string(d.dim()));
    }
    return p.derivative(2) * d.F2 + p.derivative(1) * d.F1 + p * d.F0;
}

ComplexMatrix eigenvalue_matrix(const StructureMatrices& s, unsigned n)
{
    const double nn = static_cast<double>(n);
    const auto id = ComplexMatrix::identity(s.size);
    return id * Complex(-2.0 * s.b * nn) + s.Acal * s.acal_j_commutator() * Complex(2.0 * nn * s.psi_slope())
           + s.J * Complex(2.0 * s.b) + s.Acal * s.Acal * s.Psi;
}

ComplexMatrix eigenvalue_matrix(const WeightParams& p, unsigned n) { return eigenvalue_matrix(build_structure(p), n); }

namespace {

double max_over(const std::vector<double>& ts, auto&& f)
{
    double best = 0.0;
    for (double t : ts) {
        best = std::max(best, f(t));
    }
    return best;
}

} // namespace

SymmetryReport check_symmetry_equations(const WeightParams& p, const std::vector<double>& ts)
{
    const auto s = build_structure(p);
    const auto op = build_operator(s);
    const auto w = weight_function(s);
    const auto f2 = GaussErfFunctionMatrix::from_polynomial(op.F2);
    const auto f1 = GaussErfFunctionMatrix::from_polynomial(op.F1);
    const auto f0 = GaussErfFunctionMatrix::from_polynomial(op.F0);

    const auto f2w = f2 * w;
    const auto f1w = f1 * w;
    const auto f2w_d1 = f2w.derivative();
    const auto f2w_d2 = f2w.derivative(2);
    const auto f1w_d1 = f1w.derivative();
    const auto w_f2 = w * f2.adjoint();
    const auto w_f1 = w * f1.adjoint();
    const auto w_f0 = w * f0.adjoint();
    const auto f0w = f0 * w;

    const auto ccp = f2w - w_f2;
    const auto first = f2w_d1 * Complex(2.0) - f1w - w_f1;
    const auto second = f2w_d2 - f1w_d1 + f0w - w_f0;

    SymmetryReport r;
    r.residual_ccp = max_over(ts, [&](double t) { return ccp.eval(t).max_abs(); });
    r.residual_first_order = max_over(ts, [&](double t) { return first.eval(t).max_abs(); });
    r.residual_second_order = max_over(ts, [&](double t) { return second.eval(t).max_abs(); });

    // Slowest Gaussian rate sets the sampling radius: |t| = 8 for rates >= 1.
    const double c_min = *std::min_element(s.gauss_scales.begin(), s.gauss_scales.end());
    r.boundary_radius = 8.0 / std::sqrt(std::min(c_min, 1.0));
    const auto flux = f2w_d1 - f1w;
    for (double t : {-r.boundary_radius, r.boundary_radius}) {
        const double scale = std::pow(std::abs(t), 10.0);
        r.boundary_value = std::max({r.boundary_value, scale * f2w.eval(t).max_abs(), scale * flux.eval(t).max_abs()});
    }
    r.boundary_decay_ok = r.boundary_value < 1e-6;

    const auto cx = check_chi_xi(p, ts);
    r.chi_hermitian_residual = cx.chi_hermitian_residual;
    r.xi_offdiagonal_residual = cx.xi_offdiagonal_residual;
    r.xi_diagonal_residual = cx.xi_diagonal_residual;
    return r;
}

ChiXiReport check_chi_xi(const WeightParams& p, const std::vector<double>& ts)
{
    // Conjugating by the Gaussian factor scales entry (i, j) by e^{(d_j - d_i) t^2},
    // which reaches e^{18} at t = 3 for b = 5; double rounding in xi would swamp chi.
    using Q = QuadComplex;
    using R = QuadReal;
    const auto s = build_structure_as<Q>(p);
    const std::size_t n = s.size;
    const R b = s.b;
    const auto comm = s.acal_j_commutator();
    const Q slope(s.psi_slope());
    const auto f2_prime = comm * slope;
    const auto f0 = s.J * Q(R(2) * b) + s.Acal * s.Acal * s.Psi;

    ChiXiReport r;
    for (double td : ts) {
        const R t(td);
        const auto e_plus = s.exp_acal(Q(t));
        const auto e_minus = s.exp_acal(Q(-t));
        const auto g = e_plus * s.D * e_minus;
        const auto f = s.Acal + g * Q(R(2) * t);
        const auto f_prime = g * Q(R(2)) + commutator(s.Acal, g) * Q(R(2) * t);
        const auto f2 = s.Psi + f2_prime * Q(t);
        const auto core = -(f * f2 * f) - f_prime * f2 - f * f2_prime + f0;

        const auto xi = e_minus * core * e_plus;
        // T = e^{Acal t} diag(e^{d_k t^2}), so T^{-1} core T = diag(e^{-d t^2}) xi diag(e^{d t^2}).
        QuadMatrix chi(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const R di = s.D(i, i).real();
                const R dj = s.D(j, j).real();
                chi(i, j) = xi(i, j) * Q(exp((dj - di) * t * t));
            }
        }
        r.chi_hermitian_residual = std::max(r.chi_hermitian_residual, static_cast<double>(hermitian_defect(chi)));
        r.xi_offdiagonal_residual = std::max(r.xi_offdiagonal_residual, static_cast<double>(max_offdiagonal(xi)));
        for (std::size_t k = 0; k < n; ++k) {
            const Q expected = Q(b) + Q(R(2) * t * t * b) * s.D(k, k) + Q(R(2) * b) * s.J(k, k);
            r.xi_diagonal_residual = std::max(r.xi_diagonal_residual, static_cast<double>(abs(xi(k, k) - expected)));
        }
    }
    return r;
}

double symmetry_bilinear_check(const WeightParams& p, const MatrixPolynomial& P, const MatrixPolynomial& Q)
{
    const auto s = build_structure(p);
    const auto op = build_operator(s);
    const MomentTable<Complex> moments(s);
    const auto lhs = moments.sandwich(apply_operator(op, P), Q);
    const auto rhs = moments.sandwich(P, apply_operator(op, Q));
    return max_abs_diff(lhs, rhs);
}

} // namespace hermat

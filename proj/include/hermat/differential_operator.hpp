#pragma once

#include <cstddef>
#include <vector>

#include "hermat/weight_family.hpp"

namespace hermat {

/// P -> P'' F2 + P' F1 + P F0 (coefficients act on the right).
struct DifferentialOperator {
    MatrixPolynomial F2;
    MatrixPolynomial F1;
    MatrixPolynomial F0;

    [[nodiscard]] std::size_t dim() const noexcept { return F0.dim(); }
};

DifferentialOperator build_operator(const StructureMatrices& s);
DifferentialOperator build_operator(const WeightParams& p);

/// Throws std::invalid_argument on dimension mismatch.
MatrixPolynomial apply_operator(const DifferentialOperator& d, const MatrixPolynomial& p);

/// Lambda_n = -2bn I + 2n c Acal[Acal,J] + 2b J + Acal^2 Psi, c = (b-1)/(N-1).
///
/// Obtained by matching the t^n coefficient of D(P) = Lambda P for monic P of
/// degree n. For N = 2 it is diag(-2bn, -2b(n-1)). For N >= 3 this is derived,
/// and tested against the moment-built monic sequence.
ComplexMatrix eigenvalue_matrix(const StructureMatrices& s, unsigned n);
ComplexMatrix eigenvalue_matrix(const WeightParams& p, unsigned n);

struct SymmetryReport {
    /// F2 W - W F2^*
    double residual_ccp = 0.0;
    /// 2 (F2 W)' - F1 W - W F1^*
    double residual_first_order = 0.0;
    /// (F2 W)'' - (F1 W)' + F0 W - W F0^*
    double residual_second_order = 0.0;
    double chi_hermitian_residual = 0.0;
    double xi_offdiagonal_residual = 0.0;
    double xi_diagonal_residual = 0.0;
    bool boundary_decay_ok = false;
    /// |t| at which boundary decay was sampled.
    double boundary_radius = 0.0;
    /// max |t^10 F2 W| and |t^10 ((F2 W)' - F1 W)| at +-boundary_radius.
    double boundary_value = 0.0;
};

/// Pointwise check of the three symmetry equations plus boundary decay.
/// Derivatives are exact (symbolic in the Gaussian algebra). The chi/xi fields
/// come from check_chi_xi on the same points.
SymmetryReport check_symmetry_equations(const WeightParams& p, const std::vector<double>& ts);

struct ChiXiReport {
    double chi_hermitian_residual = 0.0;
    double xi_offdiagonal_residual = 0.0;
    /// max |diag(xi) - diag(b I + 2 b t^2 D + 2 b J)|
    double xi_diagonal_residual = 0.0;
};

/// F(t) = Acal + 2t e^{Acal t} D e^{-Acal t};
/// chi = T^{-1} (-F F2 F - F' F2 - F F2' + F0) T, xi = e^{-Acal t} (...) e^{Acal t}.
ChiXiReport check_chi_xi(const WeightParams& p, const std::vector<double>& ts);

/// max | int D(P) W Q^* - int P W D(Q)^* | using exact moments.
double symmetry_bilinear_check(const WeightParams& p, const MatrixPolynomial& P, const MatrixPolynomial& Q);

} // namespace hermat

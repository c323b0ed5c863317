#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hermat/weight_family.hpp"

namespace hermat {

struct OrthogonalizeOptions {
    /// Truncate once the cancellation ratio of the moment evaluation of a norm
    /// exceeds this. Quad epsilon is ~2e-34, so 1e26 bounds the relative error
    /// of each norm by ~2e-8.
    double max_condition = 1e26;
    /// Second Gram-Schmidt pass against all earlier polynomials.
    bool refine = true;
};

/// Quad-precision shadow of a monic sequence; later stages reuse it so that
/// recurrence extraction does not start from rounded data.
struct QuadSequence {
    std::vector<QuadMatrixPolynomial> polys;
    std::vector<QuadMatrix> norms;
};

/// Monic orthogonal polynomials P_0 .. P_L and their squared norms int P W P^*.
struct MonicSequence {
    WeightParams params;
    std::vector<MatrixPolynomial> polys;
    std::vector<ComplexMatrix> norms;
    /// Cancellation ratio (sum |P_j| |M_{j+k}| |P_k|) |N_n^{-1}| at each n.
    std::vector<double> condition;
    /// True if fewer than nmax + 1 polynomials were produced.
    bool truncated = false;
    std::string diagnostic;
    std::shared_ptr<const QuadSequence> quad;

    [[nodiscard]] std::size_t size() const noexcept { return polys.size(); }
};

/// Block Gram-Schmidt on exact moments (quad precision, one refinement pass).
/// A failing positive-definiteness test or the condition guard truncates the
/// sequence with a diagnostic instead of throwing.
MonicSequence monic_sequence(const WeightParams& p, std::size_t nmax, const OrthogonalizeOptions& opts = {});

/// max over m < n of |int P_n W P_m^*| / sqrt(|N_n| |N_m|), evaluated in quad.
double orthogonality_defect(const MonicSequence& s);

enum class RecurrenceKind {
    orthonormal,
    monic,
    rodrigues_normalized,
};

const char* to_string(RecurrenceKind k);

/// Coefficients of t P_n = A_{n+1} P_{n+1} + B_n P_n + C_n P_{n-1}.
///
/// For a sequence P_0 .. P_L: A has L+1 entries (A[0] is zero), B and C have
/// L entries (C[0] is zero). residual[n] is the max coefficient of the
/// recurrence defect at n divided by max(1, max coefficient of t P_n).
struct RecurrenceTable {
    RecurrenceKind kind = RecurrenceKind::monic;
    std::vector<ComplexMatrix> A;
    std::vector<ComplexMatrix> B;
    std::vector<ComplexMatrix> C;
    std::vector<double> residual;

    [[nodiscard]] std::size_t size() const noexcept { return B.size(); }
    [[nodiscard]] double max_residual() const;
};

/// Monic table: A_n = I, B_n = coeff_{n-1}(P_n) - coeff_n(P_{n+1}),
/// C_n = |P_n|^2 (|P_{n-1}|^2)^{-1}. Throws std::invalid_argument for fewer
/// than 2 polynomials.
RecurrenceTable recurrence_from_sequence(const MonicSequence& s);

struct OrthonormalData {
    RecurrenceTable table;
    /// Delta_n with Delta_n |P_n|^2 Delta_n^* = I, upper triangular.
    std::vector<ComplexMatrix> delta;
    /// Delta_n P_n.
    std::vector<MatrixPolynomial> polys;
    /// max |B_n - B_n^*|
    double b_hermitian_defect = 0.0;
    /// max |Delta_n C_n^monic Delta_{n-1}^{-1} - A_n^*|
    double c_adjoint_defect = 0.0;
};

/// Delta_n = U_n^{-1} for |P_n|^2 = U_n U_n^*, U_n upper triangular with a
/// positive diagonal (diagonal whenever the norm is). Then
/// A_{n+1} = Delta_n Delta_{n+1}^{-1}, B_n = Delta_n B^monic_n Delta_n^{-1}, C_n = A_n^*.
OrthonormalData orthonormalize_sequence(const MonicSequence& s);

/// Gauss-Hermite nodes and weights for int f(x) e^{-x^2} dx.
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Golub-Welsch eigenvalues polished by Newton steps; weights from the
/// Christoffel function of orthonormal Hermite polynomials.
GaussHermiteRule gauss_hermite_rule(std::size_t points);

/// int f(t) e^{-c t^2} dt with an M-point rule after u = sqrt(c) t.
ComplexMatrix gauss_hermite_integrate(const std::function<ComplexMatrix(double)>& f, double c,
                                      const GaussHermiteRule& rule);

struct OracleResult {
    ComplexMatrix value;
    /// max |value(M points) - value(2M points)|
    double delta = 0.0;
    std::size_t points = 0;
};

using MatrixFunction = std::function<ComplexMatrix(double)>;

/// int L(t) W(t) R(t)^* dt, W split into its Gaussian components
/// W = sum_k v_k(t) v_k(t)^* e^{-c_k t^2}, v_k the k-th column of e^{Acal t}.
/// degree_hint bounds the polynomial degree of L and R together.
OracleResult quadrature_oracle(const WeightParams& p, const MatrixFunction& left, const MatrixFunction& right,
                               std::size_t degree_hint);

/// Same with R = I.
OracleResult quadrature_oracle(const WeightParams& p, const MatrixFunction& integrand_left, std::size_t degree_hint);

struct OracleAgreement {
    /// max over m of |oracle - exact| / max |exact|
    double max_relative = 0.0;
    /// largest M-vs-2M quadrature delta, relative
    double max_delta = 0.0;
};

/// Exact moments against quadrature_oracle for m = 0 .. mmax.
OracleAgreement oracle_moment_agreement(const WeightParams& p, unsigned mmax);

} // namespace hermat

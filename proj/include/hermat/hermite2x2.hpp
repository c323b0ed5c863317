#pragma once

#include <cstddef>
#include <vector>

#include "hermat/differential_operator.hpp"
#include "hermat/gauss_erf.hpp"
#include "hermat/weight_family.hpp"

// Closed forms for the 2x2 member of the family:
// W = [[|a|^2 t^2 e^{-t^2} + e^{-b t^2}, a t e^{-t^2}], [conj(a) t e^{-t^2}, e^{-t^2}]].
namespace hermat {

/// Physicists' Hermite polynomial by forward recurrence. Throws for n > 200.
double hermite_eval(unsigned n, double x);

/// Monomial coefficients of H_n(s t) (index k = coefficient of t^k). Cached per (n, s).
std::vector<double> scaled_hermite_coefficients(unsigned n, double s);

/// gamma_n = 2 + |a|^2 b^{n-1/2} n
double gamma_n(const WeightParams& p, long n);

/// log gamma_n, accurate also when the |a|^2 term is tiny or huge.
double log_gamma_n(const WeightParams& p, long n);

/// Explicit Hermite form of the Rodrigues sequence; P_0 = diag(1, 2).
MatrixPolynomial explicit_Pn(const WeightParams& p, unsigned n);

/// R_n with entries
/// (-1)^n (b^{-n} e^{-bt^2} + (|a|^2/2)(n + 2t^2) e^{-t^2}),  (-1)^n a t e^{-t^2},
/// (-1)^n conj(a) (2t e^{-t^2} + sqrt(pi) n (Erf(sqrt(b) t) - Erf(t))),  (-1)^n 2 e^{-t^2}.
/// Throws std::invalid_argument unless N = 2 and n >= 1.
GaussErfFunctionMatrix rodrigues_Rn(const WeightParams& p, unsigned n);

/// R_n^{(n)} W^{-1} computed in the Gaussian-Erf algebra. Throws std::runtime_error
/// if a non-polynomial atom survives with |coeff| > cancellation_tol * (largest coeff).
MatrixPolynomial rodrigues_polynomial(const WeightParams& p, unsigned n, double cancellation_tol = 1e-9);

/// Largest surviving transcendental coefficient over the largest coefficient,
/// from the same computation as rodrigues_polynomial.
double rodrigues_cancellation_defect(const WeightParams& p, unsigned n);

struct NormalizationFactors {
    unsigned n = 0;
    double gamma = 0.0;
    /// 2^n diag(1, gamma_n): leading coefficient of P_n.
    ComplexMatrix Gamma;
    /// Orthonormalizer of the monic sequence.
    ComplexMatrix Delta;
    /// Gamma_n Delta_n^{-1}: P_n = G_n (Delta_n P^monic_n).
    ComplexMatrix G;
};

/// Log-space evaluation of 2^n, n! and b^{n+1/2} for n > 30.
NormalizationFactors normalization_factors(const WeightParams& p, unsigned n);

struct OrthonormalCoefficients {
    ComplexMatrix A;
    ComplexMatrix B;
};

/// A_n (zero for n = 0) and B_n of the orthonormal recurrence
/// t Q_n = A_{n+1} Q_{n+1} + B_n Q_n + A_n^* Q_{n-1}.
OrthonormalCoefficients orthonormal_recurrence(const WeightParams& p, unsigned n);

struct MonicNormalizedCoefficients {
    /// t P^monic_n = P^monic_{n+1} + B_hat P^monic_n + C_hat P^monic_{n-1}
    ComplexMatrix B_hat;
    ComplexMatrix C_hat;
    /// t P_n = A_tilde_{n+1} P_{n+1} + B_tilde_n P_n + C_tilde_n P_{n-1}; A_tilde is A_tilde_n.
    ComplexMatrix A_tilde;
    ComplexMatrix B_tilde;
    ComplexMatrix C_tilde;
    /// max deviation of A_tilde_n = G_{n-1} A_n G_n^{-1}, B_tilde_n = G_n B_n G_n^{-1},
    /// C_tilde_n = G_n A_n^* G_{n-1}^{-1}, B_hat = Delta_n^{-1} B_n Delta_n, relative to the entry scale.
    double consistency = 0.0;
};

/// n = 0 gives zero C_hat, A_tilde and C_tilde.
MonicNormalizedCoefficients monic_and_normalized_recurrence(const WeightParams& p, unsigned n);

struct NormPair {
    ComplexMatrix monic;
    ComplexMatrix rodrigues;
};

/// |P^monic_n|^2 = (sqrt(pi) n!/2^n) diag(gamma_{n+1}/(2 b^{n+1/2}), 2/gamma_n),
/// |P_n|^2 = 2^n sqrt(pi) n! diag(gamma_{n+1}/(2 b^{n+1/2}), 2 gamma_n).
NormPair norms(const WeightParams& p, unsigned n);

struct AsymptoticReport {
    /// diag(1/sqrt 2, 1/sqrt(2b)) for b > 1, diag(1/sqrt(2b), 1/sqrt 2) for b < 1.
    ComplexMatrix limit;
    /// error[n] = max |A_n/sqrt(n) - L| entrywise, n = 0 .. horizon (error[0] unused, 0).
    std::vector<double> error;
};

/// Throws std::invalid_argument for b = 1. Deviations are evaluated as
/// L |expm1(log ratio)| so they stay accurate below the double spacing of L.
AsymptoticReport asymptotic_limit(const WeightParams& p, unsigned horizon);

struct RodriguesPdeReport {
    double residual = 0.0;
    /// Coefficient mismatch between the 2x2 displayed form
    /// [R M2]'' - [R M1]' + R Lambda_n = Lambda_n R and the general form.
    double display_mismatch = 0.0;
};

/// (R F2^*)'' - (R [F1^* + n (F2^*)'])' + R [F0^* + n (F1^*)' + C(n,2) (F2^*)''] - Lambda_n R
/// evaluated at each t.
RodriguesPdeReport verify_rodrigues_pde(const WeightParams& p, unsigned n, const std::vector<double>& ts);

} // namespace hermat

#pragma once

#include <cstddef>
#include <mutex>
#include <string>
#include <vector>

#include <boost/math/constants/constants.hpp>

#include "hermat/gauss_erf.hpp"
#include "hermat/linalg.hpp"

namespace hermat {

/// Free data of the weight family: size N >= 2, couplings a_1..a_{N-1}, scale b > 0.
struct WeightParams {
    std::size_t size = 2;
    std::vector<Complex> a{Complex(1.0, 0.0)};
    double b = 2.0;
};

enum class CouplingCheck {
    strict,
    /// Accept a_i = 0. Only meaningful for tests of the decoupled limit.
    allow_zero,
};

/// Throws std::invalid_argument naming the offending field (and index for a).
void validate(const WeightParams& p, CouplingCheck check = CouplingCheck::strict);

/// b == 1 collapses Psi to I and the odd-power tail of the nilpotent part.
inline bool is_degenerate_b(const WeightParams& p) { return p.b == 1.0; }

std::string describe(const WeightParams& p);

/// alpha_j = (1-b)^j (2j+1)^{j-1} / ((4b)^j (N-1)^j j!).
template <typename R>
R alpha_coefficient(std::size_t j, std::size_t size, const R& b)
{
    using std::pow;
    const R jj(static_cast<double>(j));
    const R nm1(static_cast<double>(size - 1));
    R factorial(1);
    for (std::size_t k = 2; k <= j; ++k) {
        factorial *= R(static_cast<double>(k));
    }
    return pow(R(1) - b, jj) * pow(R(2) * jj + R(1), jj - R(1)) / (pow(R(4) * b, jj) * pow(nm1, jj) * factorial);
}

/// Structural matrices of the family.
///
/// Acal is the odd-power nilpotent combination sum_{j < floor(N/2)} alpha_j A^{2j+1};
/// alphas holds alpha_0 .. alpha_{ceil(N/2)-1} (one more than Acal uses for odd N,
/// needed by the even-power identity). gauss_scales[k] = -2 D_kk is the Gaussian
/// rate of column k of T, so W = sum_k (column k of e^{Acal t})(...)^* e^{-c_k t^2}.
template <typename S>
struct BasicStructure {
    using Real = RealOf<S>;

    std::size_t size = 0;
    Real b{};
    BasicMatrix<S> A;
    BasicMatrix<S> J;
    BasicMatrix<S> Psi;
    BasicMatrix<S> D;
    BasicMatrix<S> Acal;
    std::vector<Real> alphas;
    BasicMatrixPolynomial<S> exp_acal;
    std::vector<Real> gauss_scales;

    /// (b - 1) / (N - 1)
    [[nodiscard]] Real psi_slope() const { return (b - Real(1)) / Real(static_cast<double>(size - 1)); }

    /// [Acal, J]
    [[nodiscard]] BasicMatrix<S> acal_j_commutator() const { return commutator(Acal, J); }
};

using StructureMatrices = BasicStructure<Complex>;
using QuadStructure = BasicStructure<QuadComplex>;

template <typename S>
BasicStructure<S> build_structure_as(const WeightParams& p, CouplingCheck check = CouplingCheck::strict)
{
    using R = RealOf<S>;
    validate(p, check);
    const std::size_t n = p.size;
    BasicStructure<S> s;
    s.size = n;
    s.b = R(p.b);
    s.A = BasicMatrix<S>(n);
    s.J = BasicMatrix<S>(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        s.A(i, i + 1) = ScalarTraits<S>::from(p.a[i]);
    }
    std::vector<S> psi(n);
    std::vector<S> d(n);
    s.gauss_scales.resize(n);
    const R slope = s.psi_slope();
    for (std::size_t k = 0; k < n; ++k) {
        const R kk(static_cast<double>(k));
        s.J(k, k) = S(kk);
        const R psi_k = R(1) + slope * kk;
        const R d_k = -(s.b / R(2)) / psi_k;
        psi[k] = S(psi_k);
        d[k] = S(d_k);
        s.gauss_scales[k] = R(-2) * d_k;
    }
    s.Psi = BasicMatrix<S>::diagonal(psi);
    s.D = BasicMatrix<S>::diagonal(d);

    const std::size_t alpha_count = (n + 1) / 2;
    for (std::size_t j = 0; j < alpha_count; ++j) {
        s.alphas.push_back(alpha_coefficient<R>(j, n, s.b));
    }
    s.Acal = BasicMatrix<S>(n);
    const auto a2 = s.A * s.A;
    auto odd_power = s.A;
    for (std::size_t j = 0; j < n / 2; ++j) {
        s.Acal += odd_power * S(s.alphas[j]);
        odd_power = odd_power * a2;
    }
    s.exp_acal = nilpotent_exp(s.Acal);
    return s;
}

inline StructureMatrices build_structure(const WeightParams& p, CouplingCheck check = CouplingCheck::strict)
{
    return build_structure_as<Complex>(p, check);
}

/// T(t) and W(t) = T T^*.
struct WeightValue {
    ComplexMatrix T;
    ComplexMatrix W;
};

WeightValue weight_eval(const StructureMatrices& s, double t);
WeightValue weight_eval(const WeightParams& p, double t);

/// W(t) as an exact function matrix of polynomial x Gaussian atoms.
GaussErfFunctionMatrix weight_function(const StructureMatrices& s);

/// int t^k exp(-c t^2) dt over the real line.
template <typename R>
R gaussian_moment(unsigned k, const R& c)
{
    if (k % 2 == 1) {
        return R(0);
    }
    using std::sqrt;
    R g = sqrt(boost::math::constants::pi<R>() / c);
    for (unsigned j = 1; j <= k / 2; ++j) {
        g *= R(static_cast<double>(2 * j - 1)) / (R(2) * c);
    }
    return g;
}

/// int t^m W(t) dt, exact up to rounding in the working precision.
template <typename S>
BasicMatrix<S> weight_moment_as(const BasicStructure<S>& s, unsigned m)
{
    const std::size_t n = s.size;
    const auto& e = s.exp_acal.coeffs();
    BasicMatrix<S> out(n);
    for (std::size_t l = 0; l < n; ++l) {
        const auto& c = s.gauss_scales[l];
        for (std::size_t p = 0; p < e.size(); ++p) {
            for (std::size_t q = 0; q < e.size(); ++q) {
                const auto g = gaussian_moment(m + static_cast<unsigned>(p + q), c);
                if (g == RealOf<S>(0)) {
                    continue;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const S left = e[p](i, l);
                    if (left == S(0)) {
                        continue;
                    }
                    for (std::size_t j = 0; j < n; ++j) {
                        out(i, j) += left * conjugate(e[q](j, l)) * S(g);
                    }
                }
            }
        }
    }
    return out;
}

ComplexMatrix weight_moment(const WeightParams& p, unsigned m);

/// Memoized moments for one parameter set.
///
/// Each table owns its memo; concurrent get() calls on one table are
/// serialized by an internal mutex, and results equal weight_moment_as.
template <typename S>
class MomentTable {
public:
    explicit MomentTable(BasicStructure<S> s)
        : structure_(std::move(s))
    {
    }

    [[nodiscard]] const BasicStructure<S>& structure() const noexcept { return structure_; }

    BasicMatrix<S> get(unsigned m) const
    {
        std::lock_guard lock(mutex_);
        while (memo_.size() <= m) {
            memo_.push_back(weight_moment_as(structure_, static_cast<unsigned>(memo_.size())));
        }
        return memo_[m];
    }

    /// int L(t) W(t) R(t)^* dt for matrix polynomials L, R.
    BasicMatrix<S> sandwich(const BasicMatrixPolynomial<S>& left, const BasicMatrixPolynomial<S>& right) const
    {
        BasicMatrix<S> out(structure_.size);
        if (left.size() + right.size() >= 2) {
            get(static_cast<unsigned>(left.size() + right.size() - 2));
        }
        for (std::size_t j = 0; j < left.size(); ++j) {
            if (left.coeffs()[j].is_zero()) {
                continue;
            }
            for (std::size_t k = 0; k < right.size(); ++k) {
                if (right.coeffs()[k].is_zero()) {
                    continue;
                }
                out += left.coeffs()[j] * get(static_cast<unsigned>(j + k)) * right.coeffs()[k].adjoint();
            }
        }
        return out;
    }

private:
    BasicStructure<S> structure_;
    mutable std::mutex mutex_;
    mutable std::vector<BasicMatrix<S>> memo_;
};

/// Closed-form W(t)^{-1} for N = 2. Throws std::invalid_argument otherwise.
ComplexMatrix weight_inverse_2x2(const WeightParams& p, double t);

/// W^{-1} as a function matrix (growing Gaussian atoms) for N = 2.
GaussErfFunctionMatrix weight_inverse_function_2x2(const WeightParams& p);

struct IdentityResidual {
    std::string name;
    double residual = 0.0;
    /// True when the identity carries a 1/(1-b) factor and b == 1.
    bool degenerate_skipped = false;
};

struct LemmaReport {
    std::vector<IdentityResidual> identities;

    [[nodiscard]] double max_residual() const;
};

/// The six structural identities of the family evaluated at t.
/// Names: suma2s, dfe0, dfe1, dfe2, suma_2k+1, sumaprinc.
LemmaReport verify_lemma_identities(const WeightParams& p, double t,
                                    CouplingCheck check = CouplingCheck::strict);

/// alpha_s alpha_j = alpha_{j+s} (2j+1)^{j-1} (2s+1)^{s-1} / (2(j+s)+1)^{j+s-1} C(j+s, s),
/// returned as a relative residual.
double alpha_product_residual(std::size_t j, std::size_t s, std::size_t size, double b);

struct AbelCheck {
    Complex lhs;
    Complex rhs;
    double relative_residual = 0.0;
};

/// sum_{m=0}^{k} C(k,m) (m+z)^m (k-m+w)^{k-m-1} against (z+w+k)^k / w, with 0^0 = 1.
/// Refuses k > 40 and w == 0 with std::invalid_argument.
AbelCheck abel_identity_check(unsigned k, Complex z, Complex w);

} // namespace hermat

#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "hermat/scalar.hpp"

namespace hermat {

/// Dense square matrix over a complex scalar type, stored row-major.
///
/// Sizes in this project never exceed a handful of rows, so there is no
/// blocking or expression templating; everything is a plain value type.
template <typename S>
class BasicMatrix {
public:
    using Scalar = S;
    using Real = RealOf<S>;

    BasicMatrix() = default;

    explicit BasicMatrix(std::size_t dim)
        : dim_(dim)
        , data_(dim * dim, S(0))
    {
    }

    BasicMatrix(std::size_t dim, std::vector<S> row_major)
        : dim_(dim)
        , data_(std::move(row_major))
    {
        if (data_.size() != dim * dim) {
            throw std::invalid_argument("BasicMatrix: expected " + std::to_string(dim * dim) + " entries, got "
                                        + std::to_string(data_.size()));
        }
    }

    static BasicMatrix identity(std::size_t dim)
    {
        BasicMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            m(i, i) = S(1);
        }
        return m;
    }

    static BasicMatrix diagonal(const std::vector<S>& diag)
    {
        BasicMatrix m(diag.size());
        for (std::size_t i = 0; i < diag.size(); ++i) {
            m(i, i) = diag[i];
        }
        return m;
    }

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

    S& operator()(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
    const S& operator()(std::size_t row, std::size_t col) const { return data_[row * dim_ + col]; }

    [[nodiscard]] const std::vector<S>& data() const noexcept { return data_; }

    BasicMatrix& operator+=(const BasicMatrix& rhs)
    {
        require_same_dim(rhs, "+=");
        for (std::size_t i = 0; i < data_.size(); ++i) {
            data_[i] += rhs.data_[i];
        }
        return *this;
    }

    BasicMatrix& operator-=(const BasicMatrix& rhs)
    {
        require_same_dim(rhs, "-=");
        for (std::size_t i = 0; i < data_.size(); ++i) {
            data_[i] -= rhs.data_[i];
        }
        return *this;
    }

    BasicMatrix& operator*=(const S& s)
    {
        for (auto& x : data_) {
            x *= s;
        }
        return *this;
    }

    friend BasicMatrix operator+(BasicMatrix lhs, const BasicMatrix& rhs) { return lhs += rhs; }
    friend BasicMatrix operator-(BasicMatrix lhs, const BasicMatrix& rhs) { return lhs -= rhs; }
    friend BasicMatrix operator*(BasicMatrix m, const S& s) { return m *= s; }
    friend BasicMatrix operator*(const S& s, BasicMatrix m) { return m *= s; }

    friend BasicMatrix operator-(BasicMatrix m)
    {
        for (auto& x : m.data_) {
            x = -x;
        }
        return m;
    }

    friend BasicMatrix operator*(const BasicMatrix& lhs, const BasicMatrix& rhs)
    {
        lhs.require_same_dim(rhs, "*");
        const std::size_t n = lhs.dim_;
        BasicMatrix out(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < n; ++k) {
                const S& l = lhs(i, k);
                if (l == S(0)) {
                    continue;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    out(i, j) += l * rhs(k, j);
                }
            }
        }
        return out;
    }

    friend bool operator==(const BasicMatrix& lhs, const BasicMatrix& rhs)
    {
        return lhs.dim_ == rhs.dim_ && lhs.data_ == rhs.data_;
    }

    [[nodiscard]] BasicMatrix adjoint() const
    {
        BasicMatrix out(dim_);
        for (std::size_t i = 0; i < dim_; ++i) {
            for (std::size_t j = 0; j < dim_; ++j) {
                out(j, i) = conjugate((*this)(i, j));
            }
        }
        return out;
    }

    [[nodiscard]] Real max_abs() const
    {
        Real best(0);
        for (const auto& x : data_) {
            best = std::max<Real>(best, magnitude(x));
        }
        return best;
    }

    [[nodiscard]] bool is_zero() const
    {
        return std::all_of(data_.begin(), data_.end(), [](const S& x) { return x == S(0); });
    }

private:
    void require_same_dim(const BasicMatrix& rhs, const char* op) const
    {
        if (dim_ != rhs.dim_) {
            throw std::invalid_argument(std::string("BasicMatrix ") + op + ": dimension mismatch ("
                                        + std::to_string(dim_) + " vs " + std::to_string(rhs.dim_) + ")");
        }
    }

    std::size_t dim_ = 0;
    std::vector<S> data_;
};

using ComplexMatrix = BasicMatrix<Complex>;
using QuadMatrix = BasicMatrix<QuadComplex>;

template <typename To, typename From>
BasicMatrix<To> convert_matrix(const BasicMatrix<From>& m)
{
    std::vector<To> data;
    data.reserve(m.data().size());
    for (const auto& x : m.data()) {
        if constexpr (std::is_same_v<To, From>) {
            data.push_back(x);
        } else if constexpr (std::is_same_v<From, Complex>) {
            data.push_back(ScalarTraits<To>::from(x));
        } else {
            data.push_back(ScalarTraits<From>::to_double(x));
        }
    }
    return BasicMatrix<To>(m.dim(), std::move(data));
}

/// max |a - b| over all entries.
template <typename S>
RealOf<S> max_abs_diff(const BasicMatrix<S>& a, const BasicMatrix<S>& b)
{
    return (a - b).max_abs();
}

/// max |M - M*|; zero for Hermitian M.
template <typename S>
RealOf<S> hermitian_defect(const BasicMatrix<S>& m)
{
    return (m - m.adjoint()).max_abs();
}

template <typename S>
RealOf<S> max_offdiagonal(const BasicMatrix<S>& m)
{
    RealOf<S> best(0);
    for (std::size_t i = 0; i < m.dim(); ++i) {
        for (std::size_t j = 0; j < m.dim(); ++j) {
            if (i != j) {
                best = std::max<RealOf<S>>(best, magnitude(m(i, j)));
            }
        }
    }
    return best;
}

template <typename S>
BasicMatrix<S> commutator(const BasicMatrix<S>& x, const BasicMatrix<S>& y)
{
    return x * y - y * x;
}

template <typename S>
BasicMatrix<S> matrix_power(const BasicMatrix<S>& m, unsigned k)
{
    auto out = BasicMatrix<S>::identity(m.dim());
    for (unsigned i = 0; i < k; ++i) {
        out = out * m;
    }
    return out;
}

/// Gauss-Jordan inverse with partial pivoting. Throws std::domain_error on an
/// exactly singular pivot.
template <typename S>
BasicMatrix<S> inverse(const BasicMatrix<S>& m)
{
    const std::size_t n = m.dim();
    BasicMatrix<S> a = m;
    auto inv = BasicMatrix<S>::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        RealOf<S> best = magnitude(a(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            const RealOf<S> v = magnitude(a(r, col));
            if (v > best) {
                best = v;
                pivot = r;
            }
        }
        if (best == RealOf<S>(0)) {
            throw std::domain_error("inverse: matrix is singular");
        }
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(col, j), a(pivot, j));
                std::swap(inv(col, j), inv(pivot, j));
            }
        }
        const S scale = S(1) / a(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            a(col, j) *= scale;
            inv(col, j) *= scale;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) {
                continue;
            }
            const S f = a(r, col);
            if (f == S(0)) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                a(r, j) -= f * a(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

/// Upper-triangular U with positive real diagonal such that H = U U*.
///
/// This is Cholesky run from the last row upwards. When H is diagonal, U is
/// the diagonal square root, which is what pins the orthonormal gauge.
/// Throws std::domain_error if H is not numerically positive definite.
template <typename S>
BasicMatrix<S> upper_cholesky(const BasicMatrix<S>& h)
{
    using R = RealOf<S>;
    const std::size_t n = h.dim();
    BasicMatrix<S> u(n);
    for (std::size_t jj = n; jj-- > 0;) {
        S diag = h(jj, jj);
        for (std::size_t k = jj + 1; k < n; ++k) {
            diag -= u(jj, k) * conjugate(u(jj, k));
        }
        const R d = diag.real();
        if (!(d > R(0))) {
            throw std::domain_error("upper_cholesky: matrix is not positive definite");
        }
        using std::sqrt;
        const R root = sqrt(d);
        u(jj, jj) = S(root);
        for (std::size_t ii = 0; ii < jj; ++ii) {
            S v = h(ii, jj);
            for (std::size_t k = jj + 1; k < n; ++k) {
                v -= u(ii, k) * conjugate(u(jj, k));
            }
            u(ii, jj) = v / S(root);
        }
    }
    return u;
}

/// Matrix-coefficient polynomial sum_k coeffs[k] t^k.
///
/// Coefficients multiply from the left of t^k; the operator code relies on
/// the ordering P(t) F(t) = sum_{j,k} P_j F_k t^{j+k}.
template <typename S>
class BasicMatrixPolynomial {
public:
    using Matrix = BasicMatrix<S>;

    BasicMatrixPolynomial() = default;

    explicit BasicMatrixPolynomial(std::size_t dim)
        : dim_(dim)
    {
    }

    BasicMatrixPolynomial(std::size_t dim, std::vector<Matrix> coeffs)
        : dim_(dim)
        , coeffs_(std::move(coeffs))
    {
        for (const auto& c : coeffs_) {
            if (c.dim() != dim_) {
                throw std::invalid_argument("BasicMatrixPolynomial: coefficient dimension mismatch");
            }
        }
    }

    static BasicMatrixPolynomial constant(const Matrix& c) { return BasicMatrixPolynomial(c.dim(), {c}); }

    /// c0 + c1 t.
    static BasicMatrixPolynomial linear(const Matrix& c0, const Matrix& c1)
    {
        return BasicMatrixPolynomial(c0.dim(), {c0, c1});
    }

    /// t^k I.
    static BasicMatrixPolynomial monomial(std::size_t dim, std::size_t k)
    {
        std::vector<Matrix> coeffs(k + 1, Matrix(dim));
        coeffs[k] = Matrix::identity(dim);
        return BasicMatrixPolynomial(dim, std::move(coeffs));
    }

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] const std::vector<Matrix>& coeffs() const noexcept { return coeffs_; }
    [[nodiscard]] std::size_t size() const noexcept { return coeffs_.size(); }

    /// Highest index with a nonzero coefficient; -1 for the zero polynomial.
    [[nodiscard]] int degree() const
    {
        for (std::size_t k = coeffs_.size(); k-- > 0;) {
            if (!coeffs_[k].is_zero()) {
                return static_cast<int>(k);
            }
        }
        return -1;
    }

    /// Coefficient of t^k, zero beyond the stored range.
    [[nodiscard]] Matrix coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Matrix(dim_); }

    Matrix& coeff_ref(std::size_t k)
    {
        if (k >= coeffs_.size()) {
            coeffs_.resize(k + 1, Matrix(dim_));
        }
        return coeffs_[k];
    }

    [[nodiscard]] Matrix leading() const
    {
        const int d = degree();
        return d < 0 ? Matrix(dim_) : coeffs_[static_cast<std::size_t>(d)];
    }

    /// Horner evaluation.
    template <typename T>
    [[nodiscard]] Matrix operator()(const T& t) const
    {
        Matrix acc(dim_);
        const S ts = S(t);
        for (std::size_t k = coeffs_.size(); k-- > 0;) {
            acc = acc * ts;
            acc += coeffs_[k];
        }
        return acc;
    }

    [[nodiscard]] BasicMatrixPolynomial derivative(unsigned order = 1) const
    {
        if (order == 0) {
            return *this;
        }
        if (coeffs_.size() <= order) {
            return BasicMatrixPolynomial(dim_);
        }
        std::vector<Matrix> out;
        out.reserve(coeffs_.size() - order);
        for (std::size_t k = order; k < coeffs_.size(); ++k) {
            RealOf<S> factor(1);
            for (std::size_t j = 0; j < order; ++j) {
                factor *= RealOf<S>(static_cast<double>(k - j));
            }
            out.push_back(coeffs_[k] * S(factor));
        }
        return BasicMatrixPolynomial(dim_, std::move(out));
    }

    /// Multiplication by the scalar variable t.
    [[nodiscard]] BasicMatrixPolynomial times_t() const
    {
        std::vector<Matrix> out;
        out.reserve(coeffs_.size() + 1);
        out.emplace_back(dim_);
        out.insert(out.end(), coeffs_.begin(), coeffs_.end());
        return BasicMatrixPolynomial(dim_, std::move(out));
    }

    [[nodiscard]] BasicMatrixPolynomial adjoint() const
    {
        std::vector<Matrix> out;
        out.reserve(coeffs_.size());
        for (const auto& c : coeffs_) {
            out.push_back(c.adjoint());
        }
        return BasicMatrixPolynomial(dim_, std::move(out));
    }

    /// Drop trailing zero coefficients.
    [[nodiscard]] BasicMatrixPolynomial trimmed() const
    {
        const int d = degree();
        std::vector<Matrix> out(coeffs_.begin(), coeffs_.begin() + (d + 1));
        return BasicMatrixPolynomial(dim_, std::move(out));
    }

    [[nodiscard]] RealOf<S> max_coeff_abs() const
    {
        RealOf<S> best(0);
        for (const auto& c : coeffs_) {
            best = std::max<RealOf<S>>(best, c.max_abs());
        }
        return best;
    }

    BasicMatrixPolynomial& operator+=(const BasicMatrixPolynomial& rhs)
    {
        require_dim(rhs);
        for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k) {
            coeff_ref(k) += rhs.coeffs_[k];
        }
        return *this;
    }

    BasicMatrixPolynomial& operator-=(const BasicMatrixPolynomial& rhs)
    {
        require_dim(rhs);
        for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k) {
            coeff_ref(k) -= rhs.coeffs_[k];
        }
        return *this;
    }

    friend BasicMatrixPolynomial operator+(BasicMatrixPolynomial a, const BasicMatrixPolynomial& b) { return a += b; }
    friend BasicMatrixPolynomial operator-(BasicMatrixPolynomial a, const BasicMatrixPolynomial& b) { return a -= b; }

    friend BasicMatrixPolynomial operator*(const BasicMatrixPolynomial& a, const BasicMatrixPolynomial& b)
    {
        a.require_dim(b);
        if (a.coeffs_.empty() || b.coeffs_.empty()) {
            return BasicMatrixPolynomial(a.dim_);
        }
        std::vector<Matrix> out(a.coeffs_.size() + b.coeffs_.size() - 1, Matrix(a.dim_));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
                out[i + j] += a.coeffs_[i] * b.coeffs_[j];
            }
        }
        return BasicMatrixPolynomial(a.dim_, std::move(out));
    }

    /// M * P(t)
    friend BasicMatrixPolynomial operator*(const Matrix& m, const BasicMatrixPolynomial& p)
    {
        std::vector<Matrix> out;
        out.reserve(p.coeffs_.size());
        for (const auto& c : p.coeffs_) {
            out.push_back(m * c);
        }
        return BasicMatrixPolynomial(p.dim_, std::move(out));
    }

    /// P(t) * M
    friend BasicMatrixPolynomial operator*(const BasicMatrixPolynomial& p, const Matrix& m)
    {
        std::vector<Matrix> out;
        out.reserve(p.coeffs_.size());
        for (const auto& c : p.coeffs_) {
            out.push_back(c * m);
        }
        return BasicMatrixPolynomial(p.dim_, std::move(out));
    }

    friend BasicMatrixPolynomial operator*(const S& s, BasicMatrixPolynomial p)
    {
        for (auto& c : p.coeffs_) {
            c *= s;
        }
        return p;
    }

private:
    void require_dim(const BasicMatrixPolynomial& rhs) const
    {
        if (dim_ != rhs.dim_) {
            throw std::invalid_argument("BasicMatrixPolynomial: dimension mismatch");
        }
    }

    std::size_t dim_ = 0;
    std::vector<Matrix> coeffs_;
};

using MatrixPolynomial = BasicMatrixPolynomial<Complex>;
using QuadMatrixPolynomial = BasicMatrixPolynomial<QuadComplex>;

template <typename To, typename From>
BasicMatrixPolynomial<To> convert_polynomial(const BasicMatrixPolynomial<From>& p)
{
    std::vector<BasicMatrix<To>> out;
    out.reserve(p.size());
    for (const auto& c : p.coeffs()) {
        out.push_back(convert_matrix<To>(c));
    }
    return BasicMatrixPolynomial<To>(p.dim(), std::move(out));
}

/// Largest coefficient-wise difference max_k max|P_k - Q_k|.
template <typename S>
RealOf<S> max_coeff_diff(const BasicMatrixPolynomial<S>& p, const BasicMatrixPolynomial<S>& q)
{
    return (p - q).max_coeff_abs();
}

/// exp(M t) for nilpotent M, returned as the terminating series
/// sum_{k<N} M^k t^k / k!.
///
/// Throws std::domain_error when max|M^N| >= 1e-14 max(1, max|M|^N).
template <typename S>
BasicMatrixPolynomial<S> nilpotent_exp(const BasicMatrix<S>& m)
{
    using R = RealOf<S>;
    const std::size_t n = m.dim();
    std::vector<BasicMatrix<S>> coeffs;
    coeffs.reserve(n);
    auto power = BasicMatrix<S>::identity(n);
    R factorial(1);
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0) {
            power = power * m;
            factorial *= R(static_cast<double>(k));
        }
        coeffs.push_back(power * S(R(1) / factorial));
    }
    const auto top = power * m;
    R scale(1);
    const R mmax = m.max_abs();
    for (std::size_t k = 0; k < n; ++k) {
        scale *= mmax;
    }
    using std::max;
    if (top.max_abs() >= R(1e-14) * max(R(1), scale)) {
        throw std::domain_error("nilpotent_exp: matrix is not nilpotent (M^N != 0)");
    }
    return BasicMatrixPolynomial<S>(n, std::move(coeffs));
}

/// Iterated commutator ad_X^n(Y): ad^0 = Y, ad^{k+1} = [X, ad^k].
template <typename S>
BasicMatrix<S> ad_power(const BasicMatrix<S>& x, const BasicMatrix<S>& y, unsigned n)
{
    if (x.dim() != y.dim()) {
        throw std::invalid_argument("ad_power: dimension mismatch");
    }
    BasicMatrix<S> out = y;
    for (unsigned k = 0; k < n; ++k) {
        out = commutator(x, out);
    }
    return out;
}

/// Smallest eigenvalue of the Hermitian part of m (double precision).
double min_hermitian_eigenvalue(const ComplexMatrix& m);

} // namespace hermat

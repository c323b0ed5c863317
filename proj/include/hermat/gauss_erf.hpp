#pragma once

#include <cstddef>
#include <vector>

#include "hermat/linalg.hpp"

namespace hermat {

/// One basis function t^power * exp(-gauss t^2) * Erf(sqrt(erf_scale) t)^[erf_scale > 0].
///
/// gauss = 0 and erf_scale = 0 give a plain monomial. gauss may be negative
/// (growing exponentials appear in W^{-1}). Scales are keyed by exact double
/// comparison: every scale in this project is produced by the same arithmetic
/// each time it is needed.
struct GaussErfAtom {
    unsigned power = 0;
    double gauss = 0.0;
    double erf_scale = 0.0;

    static GaussErfAtom plain(unsigned k) { return {k, 0.0, 0.0}; }
    static GaussErfAtom gaussian(unsigned k, double c) { return {k, c, 0.0}; }
    static GaussErfAtom erf(unsigned k, double c) { return {k, 0.0, c}; }

    [[nodiscard]] bool is_plain() const { return gauss == 0.0 && erf_scale == 0.0; }
    [[nodiscard]] bool has_erf() const { return erf_scale != 0.0; }

    [[nodiscard]] double eval(double t) const;

    friend bool operator==(const GaussErfAtom&, const GaussErfAtom&) = default;
    friend bool operator<(const GaussErfAtom& a, const GaussErfAtom& b)
    {
        if (a.erf_scale != b.erf_scale) {
            return a.erf_scale < b.erf_scale;
        }
        if (a.gauss != b.gauss) {
            return a.gauss < b.gauss;
        }
        return a.power < b.power;
    }
};

struct GaussErfTerm {
    Complex coeff;
    GaussErfAtom atom;

    friend bool operator==(const GaussErfTerm&, const GaussErfTerm&) = default;
};

/// Sort by atom, merge equal atoms, drop exactly-zero coefficients.
std::vector<GaussErfTerm> canonicalize(std::vector<GaussErfTerm> terms);

/// A scalar function that is a finite linear combination of atoms.
class GaussErfFunction {
public:
    GaussErfFunction() = default;
    explicit GaussErfFunction(std::vector<GaussErfTerm> terms);

    static GaussErfFunction constant(Complex c);
    static GaussErfFunction atom(Complex c, GaussErfAtom a);

    [[nodiscard]] const std::vector<GaussErfTerm>& terms() const noexcept { return terms_; }
    [[nodiscard]] bool empty() const noexcept { return terms_.empty(); }

    [[nodiscard]] Complex eval(double t) const;
    [[nodiscard]] GaussErfFunction derivative() const;
    [[nodiscard]] GaussErfFunction conj() const;

    GaussErfFunction& operator+=(const GaussErfFunction& rhs);
    GaussErfFunction& operator-=(const GaussErfFunction& rhs);
    GaussErfFunction& operator*=(Complex s);

    friend GaussErfFunction operator+(GaussErfFunction a, const GaussErfFunction& b) { return a += b; }
    friend GaussErfFunction operator-(GaussErfFunction a, const GaussErfFunction& b) { return a -= b; }
    friend GaussErfFunction operator*(GaussErfFunction a, Complex s) { return a *= s; }
    friend GaussErfFunction operator*(Complex s, GaussErfFunction a) { return a *= s; }

    /// Throws std::domain_error when both factors carry an Erf (Erf^2 is not in the algebra).
    friend GaussErfFunction operator*(const GaussErfFunction& a, const GaussErfFunction& b);

private:
    std::vector<GaussErfTerm> terms_;
};

/// N x N matrix whose entries are GaussErfFunctions.
class GaussErfFunctionMatrix {
public:
    GaussErfFunctionMatrix() = default;
    explicit GaussErfFunctionMatrix(std::size_t dim);

    static GaussErfFunctionMatrix from_matrix(const ComplexMatrix& m);
    static GaussErfFunctionMatrix from_polynomial(const MatrixPolynomial& p);

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

    GaussErfFunction& operator()(std::size_t i, std::size_t j) { return entries_[i * dim_ + j]; }
    const GaussErfFunction& operator()(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }

    [[nodiscard]] ComplexMatrix eval(double t) const;
    [[nodiscard]] GaussErfFunctionMatrix derivative(unsigned order = 1) const;
    [[nodiscard]] GaussErfFunctionMatrix adjoint() const;

    GaussErfFunctionMatrix& operator+=(const GaussErfFunctionMatrix& rhs);
    GaussErfFunctionMatrix& operator-=(const GaussErfFunctionMatrix& rhs);
    GaussErfFunctionMatrix& operator*=(Complex s);

    friend GaussErfFunctionMatrix operator+(GaussErfFunctionMatrix a, const GaussErfFunctionMatrix& b)
    {
        return a += b;
    }
    friend GaussErfFunctionMatrix operator-(GaussErfFunctionMatrix a, const GaussErfFunctionMatrix& b)
    {
        return a -= b;
    }
    friend GaussErfFunctionMatrix operator*(GaussErfFunctionMatrix a, Complex s) { return a *= s; }
    friend GaussErfFunctionMatrix operator*(Complex s, GaussErfFunctionMatrix a) { return a *= s; }
    friend GaussErfFunctionMatrix operator*(const GaussErfFunctionMatrix& a, const GaussErfFunctionMatrix& b);

    /// Largest |coeff| over atoms that are not plain monomials.
    [[nodiscard]] double max_transcendental_coeff() const;
    [[nodiscard]] double max_coeff() const;

    /// Collect plain atoms into a MatrixPolynomial, ignoring everything else.
    [[nodiscard]] MatrixPolynomial polynomial_part() const;

private:
    std::size_t dim_ = 0;
    std::vector<GaussErfFunction> entries_;
};

inline GaussErfFunctionMatrix gauss_erf_derivative(const GaussErfFunctionMatrix& f) { return f.derivative(); }
inline ComplexMatrix gauss_erf_eval(const GaussErfFunctionMatrix& f, double t) { return f.eval(t); }

} // namespace hermat

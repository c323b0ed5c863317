#pragma once

#include <complex>
#include <cstddef>
#include <limits>

#include <boost/multiprecision/complex128.hpp>
#include <boost/multiprecision/float128.hpp>

namespace hermat {

using Complex = std::complex<double>;

// Quad precision is used where moment-based Gram-Schmidt would otherwise
// lose most of the double mantissa to Hankel-type cancellation.
using QuadReal = boost::multiprecision::float128;
using QuadComplex = boost::multiprecision::complex128;

template <typename S>
struct ScalarTraits;

template <>
struct ScalarTraits<Complex> {
    using Real = double;
    static Complex make(double re, double im = 0.0) { return {re, im}; }
    static Complex from(const Complex& z) { return z; }
    static Complex to_double(const Complex& z) { return z; }
    static double epsilon() { return 2.220446049250313e-16; }
};

template <>
struct ScalarTraits<QuadComplex> {
    using Real = QuadReal;
    static QuadComplex make(const QuadReal& re, const QuadReal& im = QuadReal(0)) { return {re, im}; }
    static QuadComplex from(const Complex& z) { return {QuadReal(z.real()), QuadReal(z.imag())}; }
    static Complex to_double(const QuadComplex& z)
    {
        return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
    }
    static QuadReal epsilon() { return std::numeric_limits<QuadReal>::epsilon(); }
};

template <typename S>
using RealOf = typename ScalarTraits<S>::Real;

template <typename S>
RealOf<S> magnitude(const S& z)
{
    using std::abs;
    return abs(z);
}

template <typename S>
S conjugate(const S& z)
{
    using std::conj;
    return conj(z);
}

} // namespace hermat

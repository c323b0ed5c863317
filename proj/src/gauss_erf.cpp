#include "hermat/gauss_erf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hermat {

namespace {

double normalized_scale(double c)
{
    // -0.0 and 0.0 must key identically.
    return c == 0.0 ? 0.0 : c;
}

GaussErfAtom normalized(GaussErfAtom a)
{
    a.gauss = normalized_scale(a.gauss);
    a.erf_scale = normalized_scale(a.erf_scale);
    return a;
}

} // namespace

double GaussErfAtom::eval(double t) const
{
    double v = std::pow(t, static_cast<double>(power));
    if (gauss != 0.0) {
        v *= std::exp(-gauss * t * t);
    }
    if (erf_scale != 0.0) {
        v *= std::erf(std::sqrt(erf_scale) * t);
    }
    return v;
}

std::vector<GaussErfTerm> canonicalize(std::vector<GaussErfTerm> terms)
{
    for (auto& term : terms) {
        term.atom = normalized(term.atom);
    }
    std::stable_sort(terms.begin(), terms.end(),
                     [](const GaussErfTerm& a, const GaussErfTerm& b) { return a.atom < b.atom; });
    std::vector<GaussErfTerm> out;
    out.reserve(terms.size());
    for (const auto& term : terms) {
        if (!out.empty() && out.back().atom == term.atom) {
            out.back().coeff += term.coeff;
        } else {
            out.push_back(term);
        }
    }
    std::erase_if(out, [](const GaussErfTerm& t) { return t.coeff == Complex(0.0, 0.0); });
    return out;
}

GaussErfFunction::GaussErfFunction(std::vector<GaussErfTerm> terms)
    : terms_(canonicalize(std::move(terms)))
{
}

GaussErfFunction GaussErfFunction::constant(Complex c) { return GaussErfFunction({{c, GaussErfAtom::plain(0)}}); }

GaussErfFunction GaussErfFunction::atom(Complex c, GaussErfAtom a) { return GaussErfFunction({{c, a}}); }

Complex GaussErfFunction::eval(double t) const
{
    Complex acc(0.0, 0.0);
    for (const auto& term : terms_) {
        acc += term.coeff * term.atom.eval(t);
    }
    return acc;
}

GaussErfFunction GaussErfFunction::derivative() const
{
    // d/dt [t^k e^{-g t^2} E(t)] = (k t^{k-1} - 2 g t^{k+1}) e^{-g t^2} E(t)
    //                             + t^k e^{-(g+e) t^2} (2 sqrt(e) / sqrt(pi))   when E = Erf(sqrt(e) t)
    std::vector<GaussErfTerm> out;
    out.reserve(3 * terms_.size());
    const double two_over_sqrt_pi = 2.0 * std::numbers::inv_sqrtpi;
    for (const auto& [c, a] : terms_) {
        if (a.power > 0) {
            out.push_back({c * static_cast<double>(a.power), {a.power - 1, a.gauss, a.erf_scale}});
        }
        if (a.gauss != 0.0) {
            out.push_back({c * (-2.0 * a.gauss), {a.power + 1, a.gauss, a.erf_scale}});
        }
        if (a.erf_scale != 0.0) {
            out.push_back({c * (two_over_sqrt_pi * std::sqrt(a.erf_scale)), {a.power, a.gauss + a.erf_scale, 0.0}});
        }
    }
    return GaussErfFunction(std::move(out));
}

GaussErfFunction GaussErfFunction::conj() const
{
    auto out = *this;
    for (auto& term : out.terms_) {
        term.coeff = std::conj(term.coeff);
    }
    return out;
}

GaussErfFunction& GaussErfFunction::operator+=(const GaussErfFunction& rhs)
{
    auto merged = terms_;
    merged.insert(merged.end(), rhs.terms_.begin(), rhs.terms_.end());
    terms_ = canonicalize(std::move(merged));
    return *this;
}

GaussErfFunction& GaussErfFunction::operator-=(const GaussErfFunction& rhs)
{
    auto merged = terms_;
    for (const auto& term : rhs.terms_) {
        merged.push_back({-term.coeff, term.atom});
    }
    terms_ = canonicalize(std::move(merged));
    return *this;
}

GaussErfFunction& GaussErfFunction::operator*=(Complex s)
{
    if (s == Complex(0.0, 0.0)) {
        terms_.clear();
        return *this;
    }
    for (auto& term : terms_) {
        term.coeff *= s;
    }
    return *this;
}

GaussErfFunction operator*(const GaussErfFunction& a, const GaussErfFunction& b)
{
    std::vector<GaussErfTerm> out;
    out.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& x : a.terms_) {
        for (const auto& y : b.terms_) {
            if (x.atom.has_erf() && y.atom.has_erf()) {
                throw std::domain_error("GaussErfFunction: product of two Erf atoms is outside the algebra");
            }
            out.push_back({x.coeff * y.coeff,
                           {x.atom.power + y.atom.power, x.atom.gauss + y.atom.gauss,
                            x.atom.erf_scale + y.atom.erf_scale}});
        }
    }
    return GaussErfFunction(std::move(out));
}

GaussErfFunctionMatrix::GaussErfFunctionMatrix(std::size_t dim)
    : dim_(dim)
    , entries_(dim * dim)
{
}

GaussErfFunctionMatrix GaussErfFunctionMatrix::from_matrix(const ComplexMatrix& m)
{
    GaussErfFunctionMatrix out(m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i) {
        for (std::size_t j = 0; j < m.dim(); ++j) {
            out(i, j) = GaussErfFunction::constant(m(i, j));
        }
    }
    return out;
}

GaussErfFunctionMatrix GaussErfFunctionMatrix::from_polynomial(const MatrixPolynomial& p)
{
    const std::size_t n = p.dim();
    GaussErfFunctionMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<GaussErfTerm> terms;
            for (std::size_t k = 0; k < p.size(); ++k) {
                terms.push_back({p.coeffs()[k](i, j), GaussErfAtom::plain(static_cast<unsigned>(k))});
            }
            out(i, j) = GaussErfFunction(std::move(terms));
        }
    }
    return out;
}

ComplexMatrix GaussErfFunctionMatrix::eval(double t) const
{
    ComplexMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            out(i, j) = (*this)(i, j).eval(t);
        }
    }
    return out;
}

GaussErfFunctionMatrix GaussErfFunctionMatrix::derivative(unsigned order) const
{
    auto out = *this;
    for (unsigned k = 0; k < order; ++k) {
        for (auto& e : out.entries_) {
            e = e.derivative();
        }
    }
    return out;
}

GaussErfFunctionMatrix GaussErfFunctionMatrix::adjoint() const
{
    GaussErfFunctionMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            out(j, i) = (*this)(i, j).conj();
        }
    }
    return out;
}

GaussErfFunctionMatrix& GaussErfFunctionMatrix::operator+=(const GaussErfFunctionMatrix& rhs)
{
    if (dim_ != rhs.dim_) {
        throw std::invalid_argument("GaussErfFunctionMatrix +=: dimension mismatch");
    }
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        entries_[k] += rhs.entries_[k];
    }
    return *this;
}

GaussErfFunctionMatrix& GaussErfFunctionMatrix::operator-=(const GaussErfFunctionMatrix& rhs)
{
    if (dim_ != rhs.dim_) {
        throw std::invalid_argument("GaussErfFunctionMatrix -=: dimension mismatch");
    }
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        entries_[k] -= rhs.entries_[k];
    }
    return *this;
}

GaussErfFunctionMatrix& GaussErfFunctionMatrix::operator*=(Complex s)
{
    for (auto& e : entries_) {
        e *= s;
    }
    return *this;
}

GaussErfFunctionMatrix operator*(const GaussErfFunctionMatrix& a, const GaussErfFunctionMatrix& b)
{
    if (a.dim_ != b.dim_) {
        throw std::invalid_argument("GaussErfFunctionMatrix *: dimension mismatch");
    }
    const std::size_t n = a.dim_;
    GaussErfFunctionMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<GaussErfTerm> acc;
            for (std::size_t k = 0; k < n; ++k) {
                if (a(i, k).empty() || b(k, j).empty()) {
                    continue;
                }
                const auto prod = a(i, k) * b(k, j);
                acc.insert(acc.end(), prod.terms().begin(), prod.terms().end());
            }
            out(i, j) = GaussErfFunction(std::move(acc));
        }
    }
    return out;
}

double GaussErfFunctionMatrix::max_transcendental_coeff() const
{
    double best = 0.0;
    for (const auto& e : entries_) {
        for (const auto& term : e.terms()) {
            if (!term.atom.is_plain()) {
                best = std::max(best, std::abs(term.coeff));
            }
        }
    }
    return best;
}

double GaussErfFunctionMatrix::max_coeff() const
{
    double best = 0.0;
    for (const auto& e : entries_) {
        for (const auto& term : e.terms()) {
            best = std::max(best, std::abs(term.coeff));
        }
    }
    return best;
}

MatrixPolynomial GaussErfFunctionMatrix::polynomial_part() const
{
    MatrixPolynomial out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            for (const auto& term : (*this)(i, j).terms()) {
                if (term.atom.is_plain()) {
                    out.coeff_ref(term.atom.power)(i, j) += term.coeff;
                }
            }
        }
    }
    return out;
}

} // namespace hermat

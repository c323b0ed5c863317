#include "hermat/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <regex>
#include <sstream>

#include "CLI11.hpp"

#include "hermat/differential_operator.hpp"
#include "hermat/hermite2x2.hpp"
#include "hermat/orthogonalize.hpp"

namespace hermat {

RunConfig default_config()
{
    RunConfig c;
    c.grid = parse_grid("-3:3:11");
    return c;
}

Complex parse_complex(const std::string& text)
{
    static const std::string num = R"((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)";
    static const std::regex real_only("^\\s*([+-]?" + num + ")\\s*$");
    static const std::regex imag_only("^\\s*([+-]?)(" + num + ")?i\\s*$");
    static const std::regex both("^\\s*([+-]?" + num + ")([+-])(" + num + ")?i\\s*$");
    std::smatch m;
    if (std::regex_match(text, m, real_only)) {
        return {std::stod(m[1]), 0.0};
    }
    if (std::regex_match(text, m, imag_only)) {
        const double mag = m[2].matched ? std::stod(m[2]) : 1.0;
        return {0.0, m[1] == "-" ? -mag : mag};
    }
    if (std::regex_match(text, m, both)) {
        const double mag = m[3].matched ? std::stod(m[3]) : 1.0;
        return {std::stod(m[1]), m[2] == "-" ? -mag : mag};
    }
    throw ConfigError("cannot parse complex number '" + text + "' (expected re or re+imi)");
}

std::vector<Complex> parse_complex_list(const std::string& text)
{
    std::vector<Complex> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_complex(item));
    }
    if (out.empty()) {
        throw ConfigError("empty list of a parameters");
    }
    return out;
}

std::vector<double> parse_grid(const std::string& text)
{
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) {
        parts.push_back(item);
    }
    if (parts.size() != 3) {
        throw ConfigError("grid must be lo:hi:count (got '" + text + "')");
    }
    double lo = 0.0;
    double hi = 0.0;
    long count = 0;
    try {
        lo = std::stod(parts[0]);
        hi = std::stod(parts[1]);
        count = std::stol(parts[2]);
    } catch (const std::exception&) {
        throw ConfigError("grid must be lo:hi:count (got '" + text + "')");
    }
    if (count < 1 || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw ConfigError("grid count must be >= 1 and bounds finite (got '" + text + "')");
    }
    std::vector<double> out;
    for (long i = 0; i < count; ++i) {
        out.push_back(count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    return out;
}

void validate_config(const RunConfig& c)
{
    try {
        validate(c.params);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (c.nmax > 200) {
        throw ConfigError("nmax must be <= 200");
    }
    if (c.grid.empty()) {
        throw ConfigError("grid must contain at least one point");
    }
    if (!(c.tol_abs > 0.0) || !(c.tol_rel > 0.0)) {
        throw ConfigError("tolerances must be positive");
    }
    if (c.format != "json" && c.format != "csv") {
        throw ConfigError("format must be json or csv (got '" + c.format + "')");
    }
    if (c.horizon < 1) {
        throw ConfigError("horizon must be >= 1");
    }
}

namespace {

using Clock = std::chrono::steady_clock;

class SuiteRecorder {
public:
    explicit SuiteRecorder(VerificationSummary& s)
        : summary_(s)
    {
    }

    void add(std::string name, double residual, double tolerance, bool extra_ok = true, std::string detail = {})
    {
        CheckResult r;
        r.name = std::move(name);
        r.residual = residual;
        r.tolerance = tolerance;
        r.pass = std::isfinite(residual) && residual <= tolerance && extra_ok;
        r.detail = std::move(detail);
        summary_.checks.push_back(std::move(r));
    }

    void skip(std::string name, std::string detail)
    {
        CheckResult r;
        r.name = std::move(name);
        r.pass = true;
        r.skipped = true;
        r.detail = std::move(detail);
        summary_.checks.push_back(std::move(r));
    }

    // A throwing check is a failed check, never an aborted suite.
    void guarded(const std::string& name, const std::function<void()>& body)
    {
        try {
            body();
        } catch (const std::exception& e) {
            CheckResult r;
            r.name = name;
            r.residual = std::numeric_limits<double>::infinity();
            r.detail = std::string("exception: ") + e.what();
            summary_.checks.push_back(std::move(r));
        }
    }

private:
    VerificationSummary& summary_;
};

double relative(const ComplexMatrix& x, const ComplexMatrix& ref)
{
    return max_abs_diff(x, ref) / std::max(1.0, ref.max_abs());
}

double relative_poly(const MatrixPolynomial& x, const MatrixPolynomial& ref)
{
    return max_coeff_diff(x, ref) / std::max(1.0, ref.max_coeff_abs());
}

void lemma_checks(SuiteRecorder& rec, const std::string& prefix, const WeightParams& p, const std::vector<double>& ts,
                  double tol)
{
    std::vector<IdentityResidual> worst;
    for (double t : ts) {
        const auto r = verify_lemma_identities(p, t);
        if (worst.empty()) {
            worst = r.identities;
        }
        for (std::size_t i = 0; i < r.identities.size(); ++i) {
            worst[i].residual = std::max(worst[i].residual, r.identities[i].residual);
        }
    }
    for (const auto& id : worst) {
        if (id.degenerate_skipped) {
            rec.skip(prefix + id.name, "degenerate-skipped: b = 1");
        } else {
            rec.add(prefix + id.name, id.residual, tol);
        }
    }
}

void symmetry_checks(SuiteRecorder& rec, const std::string& prefix, const WeightParams& p,
                     const std::vector<double>& ts, double tol)
{
    const auto s = check_symmetry_equations(p, ts);
    rec.add(prefix + "symmetry.ccp", s.residual_ccp, tol);
    rec.add(prefix + "symmetry.first_order", s.residual_first_order, tol);
    rec.add(prefix + "symmetry.second_order", s.residual_second_order, tol);
    std::ostringstream os;
    os << "sampled at |t| = " << s.boundary_radius;
    rec.add(prefix + "symmetry.boundary_decay", s.boundary_value, 1e-6, s.boundary_decay_ok, os.str());
    rec.add(prefix + "chi_xi.chi_hermitian", s.chi_hermitian_residual, tol);
    rec.add(prefix + "chi_xi.xi_offdiagonal", s.xi_offdiagonal_residual, tol);
    rec.add(prefix + "chi_xi.xi_diagonal", s.xi_diagonal_residual, tol);
}

WeightParams random_params(std::mt19937_64& rng)
{
    std::uniform_int_distribution<std::size_t> size(2, 6);
    std::uniform_real_distribution<double> bdist(0.2, 5.0);
    std::uniform_real_distribution<double> mag(0.1, 2.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    WeightParams p;
    p.size = size(rng);
    p.a.clear();
    for (std::size_t i = 0; i + 1 < p.size; ++i) {
        p.a.push_back(std::polar(mag(rng), phase(rng)));
    }
    do {
        p.b = bdist(rng);
    } while (p.b == 1.0);
    return p;
}

} // namespace

VerificationSummary run_suite(const RunConfig& c)
{
    validate_config(c);
    const auto start = Clock::now();
    VerificationSummary summary;
    SuiteRecorder rec(summary);
    const auto& p = c.params;
    const auto& ts = c.grid;
    const std::size_t n = p.size;

    rec.guarded("structure.weight", [&] {
        const auto s = build_structure(p);
        double defect = 0.0;
        double min_eig = std::numeric_limits<double>::infinity();
        for (double t : ts) {
            const auto w = weight_eval(s, t).W;
            defect = std::max(defect, hermitian_defect(w));
            min_eig = std::min(min_eig, min_hermitian_eigenvalue(w));
        }
        std::ostringstream os;
        os << "min eigenvalue " << min_eig;
        rec.add("structure.weight", defect, c.tol_abs, min_eig > 0.0, os.str());
    });

    rec.guarded("lemma", [&] { lemma_checks(rec, "lemma.", p, ts, c.tol_abs); });
    rec.guarded("lemma.alpha_product", [&] {
        double worst = 0.0;
        for (std::size_t j = 0; j <= 4; ++j) {
            for (std::size_t s = 0; s <= 4; ++s) {
                worst = std::max(worst, alpha_product_residual(j, s, n, p.b));
            }
        }
        rec.add("lemma.alpha_product", worst, c.tol_rel);
    });
    rec.guarded("lemma.abel", [&] {
        double worst = 0.0;
        const std::vector<std::pair<Complex, Complex>> zw{
            {{0.5, 0.0}, {0.5, 0.0}}, {{1.0, 0.5}, {0.3, -0.2}}, {{2.0, -1.0}, {1.5, 0.7}}};
        for (const auto& [z, w] : zw) {
            for (unsigned k = 0; k <= 30; ++k) {
                worst = std::max(worst, abel_identity_check(k, z, w).relative_residual);
            }
        }
        rec.add("lemma.abel", worst, c.tol_rel);
    });

    rec.guarded("symmetry", [&] { symmetry_checks(rec, "", p, ts, c.tol_abs); });

    rec.guarded("oracle.moments", [&] {
        const auto o = oracle_moment_agreement(p, 30);
        std::ostringstream os;
        os << "quadrature M vs 2M delta " << o.max_delta;
        rec.add("oracle.moments", o.max_relative, c.tol_rel, true, os.str());
    });

    std::shared_ptr<MonicSequence> seq;
    rec.guarded("monic.sequence", [&] {
        seq = std::make_shared<MonicSequence>(monic_sequence(p, c.nmax));
        rec.add("monic.sequence", static_cast<double>(c.nmax + 1 - seq->size()), 0.0, !seq->truncated,
                seq->truncated ? seq->diagnostic : "complete");
    });
    if (seq) {
        rec.guarded("monic.orthogonality",
                    [&] { rec.add("monic.orthogonality", orthogonality_defect(*seq), c.tol_rel); });
        if (seq->size() >= 2) {
            rec.guarded("monic.recurrence_identity", [&] {
                rec.add("monic.recurrence_identity", recurrence_from_sequence(*seq).max_residual(), c.tol_rel);
            });
            rec.guarded("orthonormal", [&] {
                const auto on = orthonormalize_sequence(*seq);
                rec.add("orthonormal.b_hermitian", on.b_hermitian_defect, c.tol_abs);
                rec.add("orthonormal.recurrence_identity", on.table.max_residual(), c.tol_rel);
            });
        }
        rec.guarded("operator.eigen_equation", [&] {
            const auto s = build_structure(p);
            const auto op = build_operator(s);
            double worst = 0.0;
            for (std::size_t k = 0; k < seq->size(); ++k) {
                const auto& poly = seq->polys[k];
                const auto d = apply_operator(op, poly) - eigenvalue_matrix(s, static_cast<unsigned>(k)) * poly;
                worst = std::max(worst, d.max_coeff_abs() / poly.max_coeff_abs());
            }
            rec.add("operator.eigen_equation", worst, c.tol_rel);
        });
    }
    rec.guarded("operator.bilinear_symmetry", [&] {
        const auto id = ComplexMatrix::identity(n);
        const auto one = MatrixPolynomial::constant(id);
        const auto t1 = MatrixPolynomial::monomial(n, 1);
        const auto t2 = MatrixPolynomial::monomial(n, 2);
        const MomentTable<Complex> moments(build_structure(p));
        const double scale = std::max(1.0, moments.sandwich(t2, t2).max_abs());
        double worst = 0.0;
        for (const auto& [P, Q] : std::vector<std::pair<MatrixPolynomial, MatrixPolynomial>>{{one, one}, {one, t1}, {t2, t1}}) {
            worst = std::max(worst, symmetry_bilinear_check(p, P, Q) / scale);
        }
        rec.add("operator.bilinear_symmetry", worst, c.tol_rel);
    });

    if (n == 2) {
        const unsigned rod_max = static_cast<unsigned>(std::min<std::size_t>(c.nmax, 12));
        rec.guarded("rodrigues.explicit_match", [&] {
            double worst = 0.0;
            double cancel = 0.0;
            for (unsigned k = 1; k <= rod_max; ++k) {
                worst = std::max(worst, relative_poly(rodrigues_polynomial(p, k), explicit_Pn(p, k)));
                cancel = std::max(cancel, rodrigues_cancellation_defect(p, k));
            }
            rec.add("rodrigues.explicit_match", worst, c.tol_rel);
            rec.add("rodrigues.cancellation", cancel, c.tol_rel);
        });
        if (seq && seq->size() >= 2) {
            rec.guarded("closed_form", [&] {
                const auto mono = recurrence_from_sequence(*seq);
                const auto on = orthonormalize_sequence(*seq);
                const std::size_t L = seq->size() - 1;
                double orth = 0.0;
                double monic = 0.0;
                double normalized = 0.0;
                double gauge = 0.0;
                for (std::size_t k = 0; k < L; ++k) {
                    const auto u = static_cast<unsigned>(k);
                    const auto oc = orthonormal_recurrence(p, u);
                    const auto mc = monic_and_normalized_recurrence(p, u);
                    orth = std::max(orth, relative(oc.B, on.table.B[k]));
                    if (k >= 1) {
                        orth = std::max(orth, relative(oc.A, on.table.A[k]));
                    }
                    monic = std::max({monic, relative(mc.B_hat, mono.B[k]), relative(mc.C_hat, mono.C[k])});
                    normalized = std::max(normalized, mc.consistency);
                    const auto f = normalization_factors(p, u);
                    gauge = std::max(gauge, relative(f.Delta, on.delta[k]));
                }
                rec.add("closed_form.orthonormal_recurrence", orth, c.tol_rel);
                rec.add("closed_form.monic_recurrence", monic, c.tol_rel);
                rec.add("closed_form.normalized_consistency", normalized, c.tol_rel);
                rec.add("closed_form.delta_gauge", gauge, c.tol_rel);
            });
        }
        rec.guarded("closed_form.normalized_identity", [&] {
            double worst = 0.0;
            for (std::size_t k = 1; k + 1 <= c.nmax; ++k) {
                const auto u = static_cast<unsigned>(k);
                const auto cur = monic_and_normalized_recurrence(p, u);
                const auto next = monic_and_normalized_recurrence(p, u + 1);
                const auto pn = explicit_Pn(p, u);
                const auto lhs = pn.times_t();
                const auto rhs = next.A_tilde * explicit_Pn(p, u + 1) + cur.B_tilde * pn
                                 + cur.C_tilde * explicit_Pn(p, u - 1);
                worst = std::max(worst, relative_poly(rhs, lhs));
            }
            rec.add("closed_form.normalized_identity", worst, c.tol_rel);
        });
        if (seq) {
            rec.guarded("norms", [&] {
                const MomentTable<QuadComplex> moments(build_structure_as<QuadComplex>(p));
                double monic = 0.0;
                double rodrigues = 0.0;
                for (std::size_t k = 0; k < seq->size(); ++k) {
                    const auto u = static_cast<unsigned>(k);
                    const auto closed = norms(p, u);
                    monic = std::max(monic, max_abs_diff(closed.monic, seq->norms[k]) / seq->norms[k].max_abs());
                    const auto pq = convert_polynomial<QuadComplex>(explicit_Pn(p, u));
                    const auto direct = convert_matrix<Complex>(moments.sandwich(pq, pq));
                    rodrigues = std::max(rodrigues, max_abs_diff(closed.rodrigues, direct) / direct.max_abs());
                }
                rec.add("norms.monic", monic, c.tol_rel);
                rec.add("norms.rodrigues", rodrigues, c.tol_rel);
            });
        }
        rec.guarded("pde.rodrigues", [&] {
            double worst = 0.0;
            double display = 0.0;
            const unsigned pde_max = static_cast<unsigned>(std::min<std::size_t>(c.nmax, 10));
            for (unsigned k = 1; k <= pde_max; ++k) {
                const auto r = verify_rodrigues_pde(p, k, ts);
                worst = std::max(worst, r.residual);
                display = std::max(display, r.display_mismatch);
            }
            rec.add("pde.rodrigues", worst, c.tol_abs);
            rec.add("pde.display_form", display, c.tol_abs);
        });
        if (is_degenerate_b(p)) {
            rec.skip("asymptotics.limit", "degenerate-skipped: b = 1 has no stated limit");
        } else {
            rec.guarded("asymptotics.limit", [&] {
                const auto a = asymptotic_limit(p, c.horizon);
                bool monotone = true;
                for (std::size_t k = 21; k < a.error.size(); ++k) {
                    monotone = monotone && a.error[k] < a.error[k - 1];
                }
                rec.add("asymptotics.limit", a.error.back(), 0.02, monotone,
                        monotone ? "monotone for n >= 20" : "error not monotone for n >= 20");
            });
        }
    }

    if (c.sweep > 0) {
        std::mt19937_64 rng(c.seed);
        for (std::size_t i = 0; i < c.sweep; ++i) {
            const auto q = random_params(rng);
            const std::string prefix = "sweep." + std::to_string(i) + ".";
            rec.guarded(prefix + "lemma", [&] { lemma_checks(rec, prefix + "lemma.", q, ts, c.tol_abs); });
            rec.guarded(prefix + "symmetry", [&] { symmetry_checks(rec, prefix, q, ts, c.tol_abs); });
        }
    }

    std::stable_sort(summary.checks.begin(), summary.checks.end(),
                     [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
    summary.pass = std::all_of(summary.checks.begin(), summary.checks.end(),
                               [](const CheckResult& r) { return r.pass || r.skipped; });
    summary.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return summary;
}

namespace {

Table matrix_table(std::string name, const std::vector<ComplexMatrix>& ms, unsigned first = 0)
{
    Table t;
    t.name = std::move(name);
    for (std::size_t k = 0; k < ms.size(); ++k) {
        t.rows.push_back({static_cast<unsigned>(k) + first, {ms[k]}});
    }
    return t;
}

Table poly_table(std::string name, const std::vector<MatrixPolynomial>& ps)
{
    Table t;
    t.name = std::move(name);
    t.polynomial = true;
    for (std::size_t k = 0; k < ps.size(); ++k) {
        t.rows.push_back({static_cast<unsigned>(k), ps[k].coeffs()});
    }
    return t;
}

ComplexMatrix scalar(double x) { return ComplexMatrix(1, {Complex(x, 0.0)}); }

} // namespace

std::vector<Table> build_tables(const RunConfig& c, TableSet which)
{
    validate_config(c);
    const auto& p = c.params;
    const bool two = p.size == 2;
    const auto want = [which](TableSet s) { return which == TableSet::all || which == s; };
    std::vector<Table> out;

    if (want(TableSet::structure)) {
        const auto s = build_structure(p);
        const auto op = build_operator(s);
        out.push_back(matrix_table("A", {s.A}));
        out.push_back(matrix_table("J", {s.J}));
        out.push_back(matrix_table("Psi", {s.Psi}));
        out.push_back(matrix_table("D", {s.D}));
        out.push_back(matrix_table("Acal", {s.Acal}));
        std::vector<ComplexMatrix> alphas;
        for (double a : s.alphas) {
            alphas.push_back(scalar(a));
        }
        out.push_back(matrix_table("alpha", alphas));
        out.push_back(poly_table("F2", {op.F2}));
        out.push_back(poly_table("F1", {op.F1}));
        out.push_back(poly_table("F0", {op.F0}));
    }

    const bool need_seq = want(TableSet::orthopoly) || want(TableSet::recurrence) || want(TableSet::norms);
    if (need_seq) {
        const auto seq = monic_sequence(p, c.nmax);
        const auto on = orthonormalize_sequence(seq);
        if (want(TableSet::orthopoly)) {
            out.push_back(poly_table("monic_polynomials", seq.polys));
            out.push_back(poly_table("orthonormal_polynomials", on.polys));
        }
        if (want(TableSet::recurrence)) {
            if (seq.size() >= 2) {
                const auto mono = recurrence_from_sequence(seq);
                out.push_back(matrix_table("monic_B", mono.B));
                out.push_back(matrix_table("monic_C", mono.C));
            }
            out.push_back(matrix_table("A", on.table.A));
            out.push_back(matrix_table("B", on.table.B));
            out.push_back(matrix_table("C", on.table.C));
            std::vector<ComplexMatrix> lambdas;
            for (std::size_t k = 0; k < seq.size(); ++k) {
                lambdas.push_back(eigenvalue_matrix(p, static_cast<unsigned>(k)));
            }
            out.push_back(matrix_table("Lambda", lambdas));
            if (two) {
                std::vector<ComplexMatrix> a, b, bh, ch, at, bt, ct;
                for (unsigned k = 0; k <= c.nmax; ++k) {
                    const auto oc = orthonormal_recurrence(p, k);
                    const auto mc = monic_and_normalized_recurrence(p, k);
                    a.push_back(oc.A);
                    b.push_back(oc.B);
                    bh.push_back(mc.B_hat);
                    ch.push_back(mc.C_hat);
                    at.push_back(mc.A_tilde);
                    bt.push_back(mc.B_tilde);
                    ct.push_back(mc.C_tilde);
                }
                out.push_back(matrix_table("closed_A", a));
                out.push_back(matrix_table("closed_B", b));
                out.push_back(matrix_table("closed_B_hat", bh));
                out.push_back(matrix_table("closed_C_hat", ch));
                out.push_back(matrix_table("closed_A_tilde", at));
                out.push_back(matrix_table("closed_B_tilde", bt));
                out.push_back(matrix_table("closed_C_tilde", ct));
            }
        }
        if (want(TableSet::norms)) {
            out.push_back(matrix_table("monic_norms", seq.norms));
            out.push_back(matrix_table("Delta", on.delta));
            if (two) {
                std::vector<ComplexMatrix> gam, gmat, dmat, g, nm, nr;
                for (unsigned k = 0; k <= c.nmax; ++k) {
                    const auto f = normalization_factors(p, k);
                    const auto nn = norms(p, k);
                    gam.push_back(scalar(f.gamma));
                    gmat.push_back(f.Gamma);
                    dmat.push_back(f.Delta);
                    g.push_back(f.G);
                    nm.push_back(nn.monic);
                    nr.push_back(nn.rodrigues);
                }
                out.push_back(matrix_table("gamma", gam));
                out.push_back(matrix_table("closed_Gamma", gmat));
                out.push_back(matrix_table("closed_Delta", dmat));
                out.push_back(matrix_table("closed_G", g));
                out.push_back(matrix_table("closed_monic_norms", nm));
                out.push_back(matrix_table("closed_rodrigues_norms", nr));
            }
        }
    }

    if (want(TableSet::asymptotics) && two && !is_degenerate_b(p)) {
        const auto a = asymptotic_limit(p, c.horizon);
        out.push_back(matrix_table("asymptotic_limit", {a.limit}));
        std::vector<ComplexMatrix> ratio;
        std::vector<ComplexMatrix> err;
        for (unsigned k = 1; k <= c.horizon; ++k) {
            ratio.push_back(orthonormal_recurrence(p, k).A * Complex(1.0 / std::sqrt(static_cast<double>(k))));
            err.push_back(scalar(a.error[k]));
        }
        out.push_back(matrix_table("A_over_sqrt_n", ratio, 1));
        out.push_back(matrix_table("asymptotic_error", err, 1));
    }
    return out;
}

nlohmann::json matrix_to_json(const ComplexMatrix& m)
{
    auto rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        auto row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.dim(); ++j) {
            row.push_back({m(i, j).real(), m(i, j).imag()});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix matrix_from_json(const nlohmann::json& j)
{
    const std::size_t n = j.size();
    ComplexMatrix m(n);
    for (std::size_t r = 0; r < n; ++r) {
        if (j[r].size() != n) {
            throw std::invalid_argument("matrix_from_json: matrix is not square");
        }
        for (std::size_t c = 0; c < n; ++c) {
            m(r, c) = {j[r][c].at(0).get<double>(), j[r][c].at(1).get<double>()};
        }
    }
    return m;
}

nlohmann::json table_to_json(const Table& t)
{
    auto rows = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json r;
        r["n"] = row.n;
        if (t.polynomial) {
            auto coeffs = nlohmann::json::array();
            for (const auto& m : row.value) {
                coeffs.push_back(matrix_to_json(m));
            }
            r["coefficients"] = std::move(coeffs);
        } else {
            r["value"] = matrix_to_json(row.value.at(0));
        }
        rows.push_back(std::move(r));
    }
    return {{"name", t.name}, {"polynomial", t.polynomial}, {"rows", rows}};
}

Table table_from_json(const nlohmann::json& j)
{
    Table t;
    t.name = j.at("name").get<std::string>();
    t.polynomial = j.at("polynomial").get<bool>();
    for (const auto& r : j.at("rows")) {
        Table::Row row;
        row.n = r.at("n").get<unsigned>();
        if (t.polynomial) {
            for (const auto& m : r.at("coefficients")) {
                row.value.push_back(matrix_from_json(m));
            }
        } else {
            row.value.push_back(matrix_from_json(r.at("value")));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

nlohmann::json params_to_json(const WeightParams& p)
{
    auto a = nlohmann::json::array();
    for (const auto& x : p.a) {
        a.push_back({x.real(), x.imag()});
    }
    return {{"N", p.size}, {"a", a}, {"b", p.b}};
}

nlohmann::json summary_to_json(const RunConfig& c, const VerificationSummary& s)
{
    auto checks = nlohmann::json::array();
    for (const auto& r : s.checks) {
        nlohmann::json j{{"name", r.name}, {"pass", r.pass}, {"skipped", r.skipped}};
        // inf/nan are not JSON numbers
        j["residual"] = std::isfinite(r.residual) ? nlohmann::json(r.residual) : nlohmann::json(nullptr);
        j["tolerance"] = r.tolerance;
        if (!r.detail.empty()) {
            j["detail"] = r.detail;
        }
        checks.push_back(std::move(j));
    }
    nlohmann::json out;
    out["params"] = params_to_json(c.params);
    out["nmax"] = c.nmax;
    out["checks"] = std::move(checks);
    out["pass"] = s.pass;
    out["seconds"] = s.seconds;
    return out;
}

namespace {

std::string format_number(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void entry_headers(std::ostream& os, const std::string& prefix, std::size_t dim)
{
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            os << ',' << prefix << 'r' << i << 'c' << j << "_re," << prefix << 'r' << i << 'c' << j << "_im";
        }
    }
}

void entry_values(std::ostream& os, const ComplexMatrix& m)
{
    for (std::size_t i = 0; i < m.dim(); ++i) {
        for (std::size_t j = 0; j < m.dim(); ++j) {
            os << ',' << format_number(m(i, j).real()) << ',' << format_number(m(i, j).imag());
        }
    }
}

} // namespace

std::string table_to_csv(const Table& t)
{
    std::ostringstream os;
    if (t.rows.empty()) {
        os << "n\n";
        return os.str();
    }
    const std::size_t dim = t.rows.front().value.at(0).dim();
    std::size_t width = 1;
    for (const auto& r : t.rows) {
        width = std::max(width, r.value.size());
    }
    os << 'n';
    if (t.polynomial) {
        for (std::size_t k = 0; k < width; ++k) {
            entry_headers(os, "k" + std::to_string(k) + "_", dim);
        }
    } else {
        entry_headers(os, "", dim);
    }
    os << '\n';
    for (const auto& r : t.rows) {
        os << r.n;
        for (std::size_t k = 0; k < width; ++k) {
            entry_values(os, k < r.value.size() ? r.value[k] : ComplexMatrix(dim));
        }
        os << '\n';
    }
    return os.str();
}

std::string summary_to_csv(const VerificationSummary& s)
{
    std::ostringstream os;
    os << "name,residual,tolerance,pass,skipped\n";
    for (const auto& r : s.checks) {
        os << r.name << ',' << format_number(r.residual) << ',' << format_number(r.tolerance) << ','
           << (r.pass ? "true" : "false") << ',' << (r.skipped ? "true" : "false") << '\n';
    }
    return os.str();
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    }
    f << text;
    if (!f) {
        throw std::runtime_error("failed writing '" + path.string() + "'");
    }
}

nlohmann::json table_document(const RunConfig& c, const Table& t)
{
    auto j = table_to_json(t);
    j["params"] = params_to_json(c.params);
    return j;
}

} // namespace

std::vector<std::string> export_tables(const RunConfig& c)
{
    validate_config(c);
    if (c.out.empty()) {
        throw ConfigError("export needs --out <directory>");
    }
    const std::filesystem::path dir(c.out);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw std::runtime_error("cannot create output directory '" + c.out + "'");
    }
    std::vector<std::string> written;
    for (const auto& t : build_tables(c, TableSet::all)) {
        // Structure tables share names with recurrence tables; keep files distinct.
        const auto path = dir / (t.name + "." + c.format);
        if (std::filesystem::exists(path) && std::find(written.begin(), written.end(), path.string()) != written.end()) {
            const auto alt = dir / ("structure_" + t.name + "." + c.format);
            write_file(alt, c.format == "json" ? table_document(c, t).dump(2) + "\n" : table_to_csv(t));
            written.push_back(alt.string());
            continue;
        }
        write_file(path, c.format == "json" ? table_document(c, t).dump(2) + "\n" : table_to_csv(t));
        written.push_back(path.string());
    }
    return written;
}

double recurrence_roundtrip_residual(const Table& polys, const Table& B, const Table& C)
{
    if (!polys.polynomial || polys.rows.size() < 2) {
        throw std::invalid_argument("recurrence_roundtrip_residual: need at least two polynomials");
    }
    std::vector<MatrixPolynomial> P;
    for (const auto& r : polys.rows) {
        P.emplace_back(r.value.at(0).dim(), r.value);
    }
    double worst = 0.0;
    const std::size_t L = std::min(P.size() - 1, B.rows.size());
    for (std::size_t k = 0; k < L; ++k) {
        auto defect = P[k].times_t() - P[k + 1] - B.rows[k].value.at(0) * P[k];
        if (k > 0) {
            defect -= C.rows[k].value.at(0) * P[k - 1];
        }
        worst = std::max(worst, defect.max_coeff_abs() / std::max(1.0, P[k].max_coeff_abs()));
    }
    return worst;
}

namespace {

void emit(const RunConfig& c, const std::string& text)
{
    if (c.out.empty()) {
        std::cout << text;
    } else {
        write_file(c.out, text);
    }
}

void emit_tables(const RunConfig& c, const std::vector<Table>& tables)
{
    if (c.format == "json") {
        nlohmann::json doc;
        doc["params"] = params_to_json(c.params);
        nlohmann::json t = nlohmann::json::object();
        for (const auto& table : tables) {
            t[table.name] = table_to_json(table)["rows"];
        }
        doc["tables"] = std::move(t);
        emit(c, doc.dump(2) + "\n");
        return;
    }
    std::string text;
    for (const auto& table : tables) {
        text += "# table " + table.name + "\n" + table_to_csv(table);
    }
    emit(c, text);
}

} // namespace

int run_cli(int argc, char** argv)
{
    CLI::App app{"Matrix-valued Hermite-type weights: construction, verification and tables"};
    app.require_subcommand(1);

    auto cfg = default_config();
    std::size_t size = cfg.params.size;
    std::string a_text = "1";
    std::string grid_text = "-3:3:11";
    double b = cfg.params.b;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--size", size, "matrix size N >= 2");
        sub->add_option("--a", a_text, "comma-separated a_1..a_{N-1}, each re or re+imi");
        sub->add_option("--b", b, "positive real b");
        sub->add_option("--nmax", cfg.nmax, "largest polynomial degree");
        sub->add_option("--grid", grid_text, "sample points lo:hi:count");
        sub->add_option("--tol-abs", cfg.tol_abs, "absolute tolerance");
        sub->add_option("--tol-rel", cfg.tol_rel, "relative tolerance");
        sub->add_option("--format", cfg.format, "json or csv");
        sub->add_option("--out", cfg.out, "output file (directory for export)");
        sub->add_option("--seed", cfg.seed, "seed for randomized sweeps");
        sub->add_option("--sweep", cfg.sweep, "number of random parameter draws for verify");
        sub->add_option("--horizon", cfg.horizon, "largest n for the asymptotics table");
    };

    struct Sub {
        const char* name;
        const char* help;
    };
    const std::vector<Sub> subs{{"structure", "structure matrices and operator coefficients"},
                                {"verify", "run the verification suite"},
                                {"orthopoly", "monic and orthonormal polynomials"},
                                {"recurrence", "recurrence coefficient tables"},
                                {"norms", "norms and normalization factors"},
                                {"asymptotics", "A_n/sqrt(n) against its limit (N = 2)"},
                                {"export", "write every table to --out"}};
    std::vector<CLI::App*> apps;
    for (const auto& s : subs) {
        auto* sub = app.add_subcommand(s.name, s.help);
        add_common(sub);
        apps.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        cfg.params.size = size;
        cfg.params.b = b;
        cfg.params.a = parse_complex_list(a_text);
        // A single value is broadcast to every coupling.
        if (cfg.params.a.size() == 1 && size > 2) {
            cfg.params.a.assign(size - 1, cfg.params.a.front());
        }
        cfg.grid = parse_grid(grid_text);
        validate_config(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        if (cmd == "verify") {
            const auto summary = run_suite(cfg);
            if (cfg.format == "json") {
                auto doc = summary_to_json(cfg, summary);
                nlohmann::json tables = nlohmann::json::object();
                for (const auto& t : build_tables(cfg, TableSet::recurrence)) {
                    tables[t.name] = table_to_json(t)["rows"];
                }
                doc["tables"] = std::move(tables);
                emit(cfg, doc.dump(2) + "\n");
            } else {
                emit(cfg, summary_to_csv(summary));
            }
            return summary.pass ? 0 : 1;
        }
        if (cmd == "export") {
            for (const auto& path : export_tables(cfg)) {
                std::cout << path << "\n";
            }
            return 0;
        }
        if (cmd == "asymptotics" && (cfg.params.size != 2 || is_degenerate_b(cfg.params))) {
            throw ConfigError("asymptotics needs N = 2 and b != 1");
        }
        const TableSet set = cmd == "structure"    ? TableSet::structure
                             : cmd == "orthopoly"  ? TableSet::orthopoly
                             : cmd == "recurrence" ? TableSet::recurrence
                             : cmd == "norms"      ? TableSet::norms
                                                   : TableSet::asymptotics;
        emit_tables(cfg, build_tables(cfg, set));
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace hermat

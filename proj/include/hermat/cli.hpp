#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "hermat/weight_family.hpp"

namespace hermat {

/// Bad command-line input; maps to exit status 2.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    WeightParams params;
    std::size_t nmax = 10;
    std::vector<double> grid;
    double tol_abs = 1e-10;
    double tol_rel = 1e-8;
    /// "json" or "csv"
    std::string format = "json";
    /// File for single outputs, directory for export. Empty: stdout.
    std::string out;
    std::uint64_t seed = 0;
    /// Number of random parameter draws added to verify.
    std::size_t sweep = 0;
    /// Horizon for the asymptotics table.
    unsigned horizon = 200;
};

/// N=2, a=1, b=2, nmax=10, 11 points on [-3, 3].
RunConfig default_config();

/// "1.5", "-2", "1+2i", "0.5-1e-3i", "3i".
Complex parse_complex(const std::string& text);
/// Comma-separated parse_complex values.
std::vector<Complex> parse_complex_list(const std::string& text);
/// "lo:hi:count" with count >= 1.
std::vector<double> parse_grid(const std::string& text);

/// Throws ConfigError naming the offending field.
void validate_config(const RunConfig& c);

struct CheckResult {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    bool skipped = false;
    std::string detail;
};

struct VerificationSummary {
    std::vector<CheckResult> checks;
    bool pass = true;
    double seconds = 0.0;
};

/// Runs every check in a fixed order; a failing or throwing check is
/// recorded and the rest still run.
VerificationSummary run_suite(const RunConfig& c);

/// Indexed sequence of matrices (or matrix polynomial coefficients).
struct Table {
    std::string name;
    struct Row {
        unsigned n = 0;
        /// One matrix, or the coefficients of a polynomial (index = power).
        std::vector<ComplexMatrix> value;
    };
    bool polynomial = false;
    std::vector<Row> rows;
};

enum class TableSet {
    structure,
    orthopoly,
    recurrence,
    norms,
    asymptotics,
    all,
};

std::vector<Table> build_tables(const RunConfig& c, TableSet which);

nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::json table_to_json(const Table& t);
Table table_from_json(const nlohmann::json& j);
nlohmann::json params_to_json(const WeightParams& p);
nlohmann::json summary_to_json(const RunConfig& c, const VerificationSummary& s);

/// One row per n; entries flattened row-major as r{i}c{j}_re, r{i}c{j}_im
/// (prefixed k{k}_ for polynomial tables).
std::string table_to_csv(const Table& t);
std::string summary_to_csv(const VerificationSummary& s);

/// Writes <out>/<table>.json or .csv for every table. Throws std::runtime_error
/// if the directory cannot be created or a file cannot be written.
std::vector<std::string> export_tables(const RunConfig& c);

/// Relative recurrence defect of t P_n - P_{n+1} - B_n P_n - C_n P_{n-1}
/// from parsed monic tables.
double recurrence_roundtrip_residual(const Table& polys, const Table& B, const Table& C);

/// Full CLI entry point; returns the process exit status.
int run_cli(int argc, char** argv);

} // namespace hermat

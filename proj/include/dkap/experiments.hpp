#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dkap/rational.hpp"
#include "dkap/sieve.hpp"

namespace dkap {

inline constexpr double kDefaultEpsilon = 0.05;
inline constexpr double kTableTolerance = 2e-4;
inline constexpr double kSlopeThreshold = 0.6;

struct ErrorRow {
    std::uint64_t x = 0;
    std::optional<ExactRational> exact;
    double sum_value = 0;
    double main_term = 0;
    double residual = 0;             // sum_value - main_term, sign kept
    double normalized_residual = 0;  // |residual| / x^(1/2 + epsilon)
};

struct ErrorCurve {
    unsigned k = 2;
    std::uint64_t q = 1;
    std::uint64_t a = 1;
    SumMode mode = SumMode::full;
    double epsilon = kDefaultEpsilon;
    std::vector<ErrorRow> rows;
};

struct ExponentFit {
    double slope = 0;
    double intercept = 0;
    double r_squared = 0;
    std::size_t points_used = 0;
    std::size_t points_excluded = 0;  // |residual| < 1e-9
};

ErrorCurve error_curve(unsigned k, std::uint64_t q, std::uint64_t a, std::span<const std::uint64_t> x_grid,
                       SumMode mode, double epsilon = kDefaultEpsilon, const SieveOptions& opts = {});

// Least squares of log|residual| on log x. Throws InsufficientDataError with
// fewer than 3 usable rows.
ExponentFit fit_error_exponent(const ErrorCurve& curve);
ExponentFit fit_error_exponent(std::span<const double> xs, std::span<const double> residuals);

// round(lo * (hi/lo)^(i/(points-1))), deduplicated.
std::vector<std::uint64_t> geometric_grid(std::uint64_t lo, std::uint64_t hi, std::size_t points);
// 10^4, 10^4.5, ..., 10^6.
std::vector<std::uint64_t> default_error_grid();

// Published reference values, loaded from the embedded fixture.
struct ReferenceTables {
    int version = 0;
    std::map<unsigned, double> a_table;                                 // k -> A_k
    std::map<std::pair<unsigned, std::uint64_t>, double> g_table;       // (k, q) -> G_k(q)/phi(q)
};
const ReferenceTables& reference_tables();
ReferenceTables parse_reference_tables(const std::string& json_text);

struct ComparisonRow {
    unsigned k = 0;
    std::uint64_t q = 1;
    double computed = 0;
    double reference = 0;
    double abs_diff = 0;
    bool pass = false;
};

struct ComparisonReport {
    std::vector<ComparisonRow> rows;
    double tolerance = kTableTolerance;
    std::uint64_t prime_limit = 0;
    double max_abs_diff() const;
    std::size_t failures() const;
    bool all_pass() const { return failures() == 0; }
};

ComparisonReport reproduce_A_table(std::uint64_t prime_limit = kDefaultPrimeLimit, double tolerance = kTableTolerance);
ComparisonReport reproduce_G_table(std::uint64_t prime_limit = kDefaultPrimeLimit, double tolerance = kTableTolerance);

struct GrowthRow {
    std::uint64_t x = 0;
    ExactRational sum;
    double normalized = 0;  // sum / (sqrt(x) (log x)^(k-2))
};

struct GrowthReport {
    unsigned k = 2;
    std::vector<GrowthRow> rows;
    double max_min_ratio() const;
};

GrowthReport growth_check_abs_g(unsigned k, std::span<const std::uint64_t> x_grid);

struct DensityRow {
    std::uint64_t t = 0;
    std::uint64_t count = 0;
    double ratio = 0;  // count / sqrt(t)
};

std::vector<DensityRow> powerful_density_check(std::span<const std::uint64_t> t_grid);

// CSV writers; floats at 17 significant digits, exact values as num/den.
void write_csv(std::ostream& os, const ErrorCurve& curve);
void write_a_table_csv(std::ostream& os, const ComparisonReport& report);
void write_g_table_csv(std::ostream& os, const ComparisonReport& report);
void write_csv(std::ostream& os, std::span<const GrowthReport> reports);
void write_csv(std::ostream& os, std::span<const DensityRow> rows);

std::string format_double(double v);

}  // namespace dkap

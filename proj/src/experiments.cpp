#include "dkap/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "dkap/arith.hpp"
#include "dkap/errors.hpp"
#include "dkap/euler.hpp"
#include "reference_tables_json.hpp"

namespace dkap {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ErrorCurve error_curve(unsigned k, std::uint64_t q, std::uint64_t a, std::span<const std::uint64_t> x_grid,
                       SumMode mode, double epsilon, const SieveOptions& opts) {
    ErrorCurve curve;
    curve.k = k;
    curve.q = q;
    curve.a = a;
    curve.mode = mode;
    curve.epsilon = epsilon;
    const SumRequest request{.x = x_grid.empty() ? 1 : x_grid.back(), .k = k, .q = q, .a = a, .mode = mode};
    for (const auto& r : sum_at(request, x_grid, opts)) {
        ErrorRow row;
        row.x = r.request.x;
        row.exact = r.exact;
        row.sum_value = r.approx;
        row.main_term = r.main_term;
        row.residual = r.residual;
        row.normalized_residual = std::fabs(r.residual) / std::pow(static_cast<double>(row.x), 0.5 + epsilon);
        curve.rows.push_back(std::move(row));
    }
    return curve;
}

ExponentFit fit_error_exponent(std::span<const double> xs, std::span<const double> residuals) {
    if (xs.size() != residuals.size()) throw DomainError("fit_error_exponent: size mismatch");
    std::vector<double> lx, ly;
    ExponentFit fit;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (std::fabs(residuals[i]) < 1e-9) {
            ++fit.points_excluded;
            continue;
        }
        lx.push_back(std::log(xs[i]));
        ly.push_back(std::log(std::fabs(residuals[i])));
    }
    fit.points_used = lx.size();
    if (fit.points_used < 3) {
        throw InsufficientDataError("fit_error_exponent: need at least 3 rows with nonzero residual, have " +
                                    std::to_string(fit.points_used));
    }
    const double n = static_cast<double>(lx.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (sxx == 0) throw InsufficientDataError("fit_error_exponent: x values are all equal");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy == 0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
    return fit;
}

ExponentFit fit_error_exponent(const ErrorCurve& curve) {
    std::vector<double> xs, rs;
    for (const auto& row : curve.rows) {
        xs.push_back(static_cast<double>(row.x));
        rs.push_back(row.residual);
    }
    return fit_error_exponent(xs, rs);
}

std::vector<std::uint64_t> geometric_grid(std::uint64_t lo, std::uint64_t hi, std::size_t points) {
    if (lo < 1 || hi < lo || points == 0) throw DomainError("geometric_grid: need 1 <= lo <= hi and points >= 1");
    std::vector<std::uint64_t> out;
    for (std::size_t i = 0; i < points; ++i) {
        const double t = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
        auto v = static_cast<std::uint64_t>(std::llround(static_cast<double>(lo) * std::pow(static_cast<double>(hi) / lo, t)));
        v = std::clamp(v, lo, hi);
        if (out.empty() || v > out.back()) out.push_back(v);
    }
    return out;
}

std::vector<std::uint64_t> default_error_grid() { return geometric_grid(10'000, 1'000'000, 5); }

ReferenceTables parse_reference_tables(const std::string& json_text) {
    const auto j = nlohmann::json::parse(json_text);
    ReferenceTables t;
    t.version = j.at("version").get<int>();
    for (const auto& [k, v] : j.at("a_table").items()) t.a_table[static_cast<unsigned>(std::stoul(k))] = v.get<double>();
    const auto qs = j.at("g_table").at("q").get<std::vector<std::uint64_t>>();
    for (const auto& [k, row] : j.at("g_table").at("rows").items()) {
        const auto values = row.get<std::vector<double>>();
        if (values.size() != qs.size()) throw DomainError("reference g_table row " + k + " has the wrong length");
        for (std::size_t i = 0; i < qs.size(); ++i) t.g_table[{static_cast<unsigned>(std::stoul(k)), qs[i]}] = values[i];
    }
    return t;
}

const ReferenceTables& reference_tables() {
    static const ReferenceTables tables = parse_reference_tables(kReferenceTablesJson);
    return tables;
}

double ComparisonReport::max_abs_diff() const {
    double m = 0;
    for (const auto& r : rows) m = std::max(m, r.abs_diff);
    return m;
}

std::size_t ComparisonReport::failures() const {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.pass; }));
}

ComparisonReport reproduce_A_table(std::uint64_t prime_limit, double tolerance) {
    ComparisonReport report;
    report.tolerance = tolerance;
    report.prime_limit = prime_limit;
    const EulerOptions opts{.prime_limit = prime_limit};
    for (const auto& [k, ref] : reference_tables().a_table) {
        ComparisonRow row{.k = k, .q = 1, .computed = compute_A_k(k, opts).value, .reference = ref};
        row.abs_diff = std::fabs(row.computed - row.reference);
        row.pass = row.abs_diff <= tolerance;
        report.rows.push_back(row);
    }
    return report;
}

ComparisonReport reproduce_G_table(std::uint64_t prime_limit, double tolerance) {
    ComparisonReport report;
    report.tolerance = tolerance;
    report.prime_limit = prime_limit;
    const EulerOptions opts{.prime_limit = prime_limit};
    std::map<unsigned, double> a_k;
    for (const auto& [key, ref] : reference_tables().g_table) {
        const auto [k, q] = key;
        if (!a_k.contains(k)) a_k[k] = compute_A_k(k, opts).value;
        ComparisonRow row{.k = k, .q = q, .reference = ref};
        row.computed = a_k[k] * coprime_correction(q, k) / static_cast<double>(euler_phi(q));
        row.abs_diff = std::fabs(row.computed - row.reference);
        row.pass = row.abs_diff <= tolerance;
        report.rows.push_back(row);
    }
    return report;
}

double GrowthReport::max_min_ratio() const {
    if (rows.empty()) return 0;
    double lo = rows.front().normalized, hi = lo;
    for (const auto& r : rows) {
        lo = std::min(lo, r.normalized);
        hi = std::max(hi, r.normalized);
    }
    return hi / lo;
}

GrowthReport growth_check_abs_g(unsigned k, std::span<const std::uint64_t> x_grid) {
    if (x_grid.size() < 3) throw DomainError("growth_check_abs_g: need at least 3 grid points");
    for (std::size_t i = 1; i < x_grid.size(); ++i) {
        if (x_grid[i] <= x_grid[i - 1]) throw DomainError("growth_check_abs_g: grid must be ascending");
    }
    GrowthReport report;
    report.k = k;
    for (const std::uint64_t x : x_grid) {
        GrowthRow row{.x = x, .sum = sum_abs_g_k(x, k)};
        const double xd = static_cast<double>(x);
        row.normalized = row.sum.to_double() / (std::sqrt(xd) * std::pow(std::log(xd), static_cast<double>(k) - 2));
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::vector<DensityRow> powerful_density_check(std::span<const std::uint64_t> t_grid) {
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (t_grid[i] <= t_grid[i - 1]) throw DomainError("powerful_density_check: grid must be ascending");
    }
    std::vector<DensityRow> out;
    if (t_grid.empty()) return out;
    const auto all = powerful_numbers_up_to(t_grid.back());
    for (const std::uint64_t t : t_grid) {
        DensityRow row{.t = t};
        row.count = static_cast<std::uint64_t>(std::upper_bound(all.begin(), all.end(), t) - all.begin());
        row.ratio = static_cast<double>(row.count) / std::sqrt(static_cast<double>(t));
        out.push_back(row);
    }
    return out;
}

void write_csv(std::ostream& os, const ErrorCurve& curve) {
    os << "x,sum_exact,sum_value,main_term,residual,normalized_residual\n";
    for (const auto& r : curve.rows) {
        os << r.x << ',' << (r.exact ? r.exact->str() : "") << ',' << format_double(r.sum_value) << ','
           << format_double(r.main_term) << ',' << format_double(r.residual) << ','
           << format_double(r.normalized_residual) << '\n';
    }
}

void write_a_table_csv(std::ostream& os, const ComparisonReport& report) {
    os << "k,computed,reference,abs_diff,pass\n";
    for (const auto& r : report.rows) {
        os << r.k << ',' << format_double(r.computed) << ',' << format_double(r.reference) << ','
           << format_double(r.abs_diff) << ',' << (r.pass ? 1 : 0) << '\n';
    }
}

void write_g_table_csv(std::ostream& os, const ComparisonReport& report) {
    os << "k,q,computed,reference,abs_diff,pass\n";
    for (const auto& r : report.rows) {
        os << r.k << ',' << r.q << ',' << format_double(r.computed) << ',' << format_double(r.reference) << ','
           << format_double(r.abs_diff) << ',' << (r.pass ? 1 : 0) << '\n';
    }
}

void write_csv(std::ostream& os, std::span<const GrowthReport> reports) {
    os << "k,x,sum_exact,sum_value,normalized\n";
    for (const auto& rep : reports) {
        for (const auto& r : rep.rows) {
            os << rep.k << ',' << r.x << ',' << r.sum.str() << ',' << format_double(r.sum.to_double()) << ','
               << format_double(r.normalized) << '\n';
        }
    }
}

void write_csv(std::ostream& os, std::span<const DensityRow> rows) {
    os << "t,count,ratio\n";
    for (const auto& r : rows) os << r.t << ',' << r.count << ',' << format_double(r.ratio) << '\n';
}

}  // namespace dkap

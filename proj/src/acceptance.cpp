#include "dkap/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "dkap/arith.hpp"
#include "dkap/characters.hpp"
#include "dkap/divisor.hpp"
#include "dkap/errors.hpp"
#include "dkap/euler.hpp"
#include "dkap/experiments.hpp"
#include "dkap/sieve.hpp"

namespace dkap {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

CriterionResult make_result(int id, std::string title) {
    CriterionResult r;
    r.id = id;
    r.title = std::move(title);
    return r;
}

CriterionResult a_table() {
    CriterionResult r = make_result(1, "A_k table reproduction (k=2..8, prime_limit=1e6, tol 2e-4, < 5 s)");
    const auto start = Clock::now();
    const auto report = reproduce_A_table(kDefaultPrimeLimit, kTableTolerance);
    r.seconds = seconds_since(start);
    std::ostringstream os;
    os << report.failures() << "/" << report.rows.size() << " rows outside tolerance; max |diff| = "
       << format_double(report.max_abs_diff());
    for (const auto& row : report.rows) {
        if (!row.pass) os << "; k=" << row.k << " computed " << fmt("%.6f", row.computed) << " vs " << fmt("%.4f", row.reference);
    }
    r.detail = os.str();
    r.pass = report.all_pass() && r.seconds < 5.0;
    return r;
}

CriterionResult g_table() {
    CriterionResult r = make_result(2, "G_k(q)/phi(q) table reproduction (56 entries, tol 2e-4, < 10 s)");
    const auto start = Clock::now();
    const auto report = reproduce_G_table(kDefaultPrimeLimit, kTableTolerance);
    r.seconds = seconds_since(start);
    std::ostringstream os;
    os << report.failures() << "/" << report.rows.size() << " entries outside tolerance; max |diff| = "
       << format_double(report.max_abs_diff());
    for (const auto& row : report.rows) {
        if (!row.pass) {
            os << "; (k=" << row.k << ",q=" << row.q << ") computed " << fmt("%.6f", row.computed) << " vs "
               << fmt("%.4f", row.reference);
        }
    }
    r.detail = os.str();
    r.pass = report.all_pass() && r.seconds < 10.0;
    return r;
}

CriterionResult convolution() {
    CriterionResult r = make_result(3, "Convolution identity sum_{d|n} g_k(d) = D_k(n), n <= 1e5, k = 2..8 (< 60 s)");
    const auto start = Clock::now();
    constexpr std::uint64_t N = 100'000;
    const auto spf = sieve_spf(N);
    std::vector<Factorization> fact(N + 1);
    for (std::uint64_t n = 1; n <= N; ++n) fact[n] = factorize(n, spf);
    std::size_t failures = 0;
    std::string first_failure;
    bool g1_ok = true;
    for (unsigned k = 2; k <= 8; ++k) {
        const DivisorParams params(k);
        g1_ok &= g_k(fact[1], params) == ExactRational(1);
        std::vector<ExactRational> acc(N + 1, ExactRational(0));
        for (std::uint64_t d = 1; d <= N; ++d) {
            const auto g = g_k(fact[d], params);
            if (g.is_zero()) continue;
            for (std::uint64_t m = d; m <= N; m += d) acc[m] += g;
        }
        for (std::uint64_t n = 1; n <= N; ++n) {
            if (acc[n] != D_k(fact[n], params)) {
                if (failures++ == 0) first_failure = fmt("k=%u n=%llu", k, static_cast<unsigned long long>(n));
            }
        }
    }
    r.seconds = seconds_since(start);
    r.pass = failures == 0 && g1_ok && r.seconds < 60.0;
    r.detail = fmt("%zu failures over 7e5 (n,k) pairs; g_k(1) = 1: %s", failures, g1_ok ? "yes" : "no");
    if (failures) r.detail += "; first: " + first_failure;
    return r;
}

CriterionResult orthogonality() {
    CriterionResult r = make_result(4, "Orthogonality indicator within 1e-10 of {0,1}, q <= 50, valid a, n <= q");
    const auto start = Clock::now();
    std::size_t checks = 0, failures = 0;
    double worst = 0;
    for (std::uint64_t q = 1; q <= 50; ++q) {
        const CharacterGroup group(q);
        for (std::uint64_t a = 1; a <= q; ++a) {
            if (gcd_u64(a, q) != 1) continue;
            for (std::uint64_t n = 1; n <= q; ++n) {
                const double expected = (n % q == a % q) ? 1.0 : 0.0;
                const double err = std::fabs(orthogonality_indicator(group, static_cast<std::int64_t>(a),
                                                                     static_cast<std::int64_t>(n)) -
                                             expected);
                worst = std::max(worst, err);
                ++checks;
                if (err > 1e-10) ++failures;
            }
        }
    }
    r.seconds = seconds_since(start);
    r.pass = failures == 0;
    r.detail = fmt("%zu/%zu checks failed; worst error %.3e", failures, checks, worst);
    return r;
}

CriterionResult filtration(unsigned workers) {
    CriterionResult r = make_result(5, "Character filtration equals direct AP sum to 1e-6 relative (q <= 20, k in {2,3})");
    const auto start = Clock::now();
    SieveOptions opts;
    opts.workers = workers;
    std::size_t checks = 0, failures = 0;
    double worst = 0;
    for (unsigned k : {2u, 3u}) {
        for (std::uint64_t x : {100ull, 1'000ull, 10'000ull}) {
            for (std::uint64_t q = 1; q <= 20; ++q) {
                const CharacterGroup group(q);
                const auto classes = residue_class_sums(x, k, q, opts);
                for (std::uint64_t a = 1; a <= q; ++a) {
                    if (gcd_u64(a, q) != 1) continue;
                    const double via = ap_sum_via_characters(group, classes, a);
                    const auto direct = sum_progression(x, k, q, a, opts);
                    const double ref = direct.exact ? direct.exact->to_double() : direct.approx;
                    const double rel = std::fabs(via - ref) / std::max(std::fabs(ref), 1.0);
                    worst = std::max(worst, rel);
                    ++checks;
                    if (rel > 1e-6) ++failures;
                }
            }
        }
    }
    r.seconds = seconds_since(start);
    r.pass = failures == 0;
    r.detail = fmt("%zu/%zu (k,x,q,a) cases failed; worst relative gap %.3e", failures, checks, worst);
    return r;
}

CriterionResult exponent(unsigned workers) {
    CriterionResult r = make_result(6, "AP error exponent: slope <= 0.6 and |E(x)|/x^0.55 non-increasing, (k,q) in {2,3}x{3,4,5}");
    const auto start = Clock::now();
    SieveOptions opts;
    opts.workers = workers;
    const auto grid = default_error_grid();
    std::size_t cases = 0, failures = 0;
    double worst_slope = -1e300;
    std::ostringstream bad;
    for (unsigned k : {2u, 3u}) {
        for (std::uint64_t q : {3ull, 4ull, 5ull}) {
            for (std::uint64_t a = 1; a <= q; ++a) {
                if (gcd_u64(a, q) != 1) continue;
                const auto curve = error_curve(k, q, a, grid, SumMode::progression, kDefaultEpsilon, opts);
                const auto fit = fit_error_exponent(curve);
                const std::size_t n = curve.rows.size();
                double lower = 0, upper = 0;
                for (std::size_t i = 0; i < n / 2; ++i) lower = std::max(lower, curve.rows[i].normalized_residual);
                for (std::size_t i = n - n / 2; i < n; ++i) upper = std::max(upper, curve.rows[i].normalized_residual);
                const bool ok = fit.slope <= kSlopeThreshold && upper <= lower;
                worst_slope = std::max(worst_slope, fit.slope);
                ++cases;
                if (!ok) {
                    ++failures;
                    bad << fmt("; (k=%u,q=%llu,a=%llu) slope %.3f upper %.3g lower %.3g", k,
                               static_cast<unsigned long long>(q), static_cast<unsigned long long>(a), fit.slope, upper,
                               lower);
                }
            }
        }
    }
    r.seconds = seconds_since(start);
    r.pass = failures == 0;
    r.detail = fmt("%zu/%zu (k,q,a) curves failed; max slope %.3f", failures, cases, worst_slope) + bad.str();
    return r;
}

CriterionResult growth() {
    CriterionResult r = make_result(7, "sum |g_k| / (sqrt(x) (log x)^(k-2)) max/min <= 3 over {1e2,1e4,1e6}, k = 2,3,4");
    const auto start = Clock::now();
    const std::uint64_t grid[] = {100, 10'000, 1'000'000};
    bool ok = true;
    std::ostringstream os;
    for (unsigned k : {2u, 3u, 4u}) {
        const auto report = growth_check_abs_g(k, grid);
        const double ratio = report.max_min_ratio();
        ok &= ratio <= 3.0;
        os << (k == 2 ? "" : "; ") << "k=" << k << " max/min " << fmt("%.4f", ratio);
    }
    r.seconds = seconds_since(start);
    r.pass = ok;
    r.detail = os.str();
    return r;
}

CriterionResult polya_vinogradov() {
    CriterionResult r = make_result(8, "pv_ratio(q) <= 1 for 3 <= q <= 500");
    const auto start = Clock::now();
    double worst = 0;
    std::uint64_t worst_q = 0;
    std::size_t failures = 0;
    for (std::uint64_t q = 3; q <= 500; ++q) {
        const double v = pv_ratio(q);
        if (v > worst) {
            worst = v;
            worst_q = q;
        }
        if (v > 1.0) ++failures;
    }
    r.seconds = seconds_since(start);
    r.pass = failures == 0;
    r.detail = fmt("%zu moduli above 1; max ratio %.4f at q=%llu", failures, worst,
                   static_cast<unsigned long long>(worst_q));
    return r;
}

CriterionResult powerful_count() {
    CriterionResult r = make_result(9, "Powerful count(t)/sqrt(t) in [2.0, 2.3] for t in {1e4, 1e5, 1e6}");
    const auto start = Clock::now();
    const std::uint64_t grid[] = {10'000, 100'000, 1'000'000};
    bool ok = true;
    std::ostringstream os;
    for (const auto& row : powerful_density_check(grid)) {
        ok &= row.ratio >= 2.0 && row.ratio <= 2.3;
        os << (row.t == grid[0] ? "" : "; ") << "t=" << row.t << " count " << row.count << " ratio "
           << fmt("%.4f", row.ratio);
    }
    r.seconds = seconds_since(start);
    r.pass = ok;
    r.detail = os.str();
    return r;
}

CriterionResult performance(unsigned workers) {
    CriterionResult r = make_result(10, "sum_full(1e7,3) < 10 s, sum_full(1e8,2) < 120 s, exact and worker-count independent");
    const auto start = Clock::now();
    SieveOptions opts;
    opts.workers = workers;

    auto t0 = Clock::now();
    const auto s3 = sum_full(10'000'000, 3, opts);
    const double t_small = seconds_since(t0);

    t0 = Clock::now();
    const auto s2 = sum_full(100'000'000, 2, opts);
    const double t_large = seconds_since(t0);

    // Same sum under different worker counts and segment sizes.
    bool deterministic = true;
    for (unsigned w : {1u, 2u, 4u}) {
        SieveOptions alt;
        alt.workers = w;
        alt.segment_size = std::uint64_t{1} << (18 + w);
        const auto again = sum_full(10'000'000, 3, alt);
        deterministic &= again.exact == s3.exact && again.approx == s3.approx;
    }
    r.seconds = seconds_since(start);
    const bool exact = s3.exact.has_value() && s2.exact.has_value();
    r.pass = exact && deterministic && t_small < 10.0 && t_large < 120.0;
    r.detail = fmt("sum_full(1e7,3) %.2f s, sum_full(1e8,2) %.2f s, exact: %s, deterministic: %s", t_small, t_large,
                   exact ? "yes" : "no", deterministic ? "yes" : "no");
    if (s2.exact) r.detail += "; S_2(1e8) = " + s2.exact->str();
    return r;
}

}  // namespace

std::string format_result_line(const CriterionResult& r) {
    return fmt("[%s] %2d  %s  (%.2f s) -- ", r.pass ? "PASS" : "FAIL", r.id, r.title.c_str(), r.seconds) + r.detail;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
    std::vector<std::function<CriterionResult()>> criteria = {
        a_table,
        g_table,
        convolution,
        orthogonality,
        [&] { return filtration(opts.workers); },
        [&] { return exponent(opts.workers); },
        growth,
        polya_vinogradov,
        powerful_count,
    };
    if (opts.include_performance) criteria.emplace_back([&] { return performance(opts.workers); });
    std::vector<CriterionResult> out;
    for (const auto& run : criteria) {
        CriterionResult r;
        try {
            r = run();
        } catch (const std::exception& e) {
            r.id = static_cast<int>(out.size()) + 1;
            r.title = "criterion raised an exception";
            r.detail = e.what();
        }
        if (opts.on_result) opts.on_result(r);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace dkap

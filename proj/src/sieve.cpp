#include "dkap/sieve.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cfloat>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "dkap/arith.hpp"
#include "dkap/divisor.hpp"
#include "dkap/errors.hpp"
#include "detail/scaled_accumulator.hpp"

namespace dkap {

std::string_view to_string(SumMode mode) {
    switch (mode) {
        case SumMode::full: return "full";
        case SumMode::coprime: return "coprime";
        case SumMode::progression: return "progression";
    }
    return "?";
}

void SumRequest::validate() const {
    if (x < 1) throw DomainError("x must be >= 1");
    DivisorParams{k};
    if (q < 1) throw DomainError("q must be >= 1");
    if (mode == SumMode::progression) {
        if (a < 1 || a > q) throw DomainError("residue a must satisfy 1 <= a <= q");
        if (gcd_u64(a, q) != 1) {
            throw DomainError("gcd(a, q) must be 1 (got a=" + std::to_string(a) + ", q=" + std::to_string(q) + ")");
        }
    }
}

namespace {

using detail::kMaxOmega;
using detail::ScaledAccumulator;

constexpr unsigned kMaxExponent = 64;

struct Workspace {
    std::vector<std::uint64_t> num;
    std::vector<std::uint64_t> pp;  // product of the prime powers found so far
    std::vector<std::uint8_t> om;
};

// Evaluates d_k and omega on [lo, hi) from the primes <= sqrt(xmax): each
// prime p marks its multiples, then the multiples of p^2, p^3, ... upgrade
// C(k, 1) to C(k+j-1, j). Whatever is left of n after removing the found
// prime powers is 1 or a single prime > sqrt(xmax).
class SegmentSieve {
public:
    SegmentSieve(std::uint64_t xmax, unsigned k) : k_(k), primes_(primes_up_to(isqrt(xmax))) {
        DivisorParams{k};
        binom_.assign(kMaxExponent + 1, 0);
        for (unsigned j = 0; j <= kMaxExponent; ++j) {
            u128 b;
            try {
                b = d_k_prime_power(k, j);
            } catch (const ArithmeticError&) {
                b = ~u128(0);
            }
            binom_[j] = b > UINT64_MAX ? UINT64_MAX : static_cast<std::uint64_t>(b);
        }
    }

    unsigned k() const { return k_; }

    void evaluate(std::uint64_t lo, std::uint64_t hi, Workspace& ws) const {
        const std::size_t len = hi - lo;
        ws.num.assign(len, 1);
        ws.pp.assign(len, 1);
        ws.om.assign(len, 0);
        std::uint64_t* num = ws.num.data();
        std::uint64_t* pp = ws.pp.data();
        std::uint8_t* om = ws.om.data();
        const std::uint64_t last = hi - 1;
        bool overflow = false;
        for (const std::uint64_t p : primes_) {
            if (p > last / p) break;
            for (std::uint64_t n = (lo + p - 1) / p * p; n < hi; n += p) {
                const std::size_t i = n - lo;
                num[i] *= k_;
                pp[i] *= p;
                ++om[i];
            }
            std::uint64_t pk = p * p;
            for (unsigned j = 2;; ++j) {
                const std::uint64_t prev = binom_[j - 1], next = binom_[j];
                for (std::uint64_t n = (lo + pk - 1) / pk * pk; n < hi; n += pk) {
                    const std::size_t i = n - lo;
                    overflow |= __builtin_mul_overflow(num[i] / prev, next, &num[i]);
                    pp[i] *= p;
                }
                if (pk > last / p) break;
                pk *= p;
            }
        }
        for (std::size_t i = 0; i < len; ++i) {
            if (pp[i] != lo + i) {
                overflow |= __builtin_mul_overflow(num[i], std::uint64_t{k_}, &num[i]);
                ++om[i];
            }
        }
        if (overflow) {
            throw ArithmeticError("d_" + std::to_string(k_) + "(n) exceeds 64 bits in [" + std::to_string(lo) + ", " +
                                  std::to_string(hi) + ")");
        }
    }

private:
    unsigned k_;
    std::vector<std::uint64_t> primes_;
    std::vector<std::uint64_t> binom_;  // C(k+j-1, j), saturated
};

unsigned resolve_workers(unsigned requested, std::size_t tasks) {
    unsigned w = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(w, std::max<std::size_t>(tasks, 1)));
}

// Runs work(task_index, workspace) for every task; tasks are claimed from a
// shared counter, so results must be stored by index.
template <class Work>
void run_parallel(std::size_t tasks, unsigned workers, Work&& work) {
    workers = resolve_workers(workers, tasks);
    if (workers <= 1) {
        Workspace ws;
        for (std::size_t t = 0; t < tasks; ++t) work(t, ws);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    std::mutex error_mu;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            Workspace ws;
            while (!failed.load(std::memory_order_relaxed)) {
                const std::size_t t = next.fetch_add(1);
                if (t >= tasks) return;
                try {
                    work(t, ws);
                } catch (...) {
                    std::lock_guard lock(error_mu);
                    if (!error) error = std::current_exception();
                    failed = true;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

struct Segment {
    std::uint64_t lo, hi;
};

// Cuts [1, xmax] into pieces of at most `size`, also splitting after every checkpoint.
std::vector<Segment> plan_segments(std::uint64_t xmax, std::uint64_t size, std::span<const std::uint64_t> checkpoints) {
    if (size == 0) throw DomainError("segment_size must be positive");
    std::vector<Segment> out;
    std::size_t c = 0;
    for (std::uint64_t lo = 1; lo <= xmax;) {
        std::uint64_t hi = std::min(xmax + 1, lo + size);
        while (c < checkpoints.size() && checkpoints[c] < lo) ++c;
        if (c < checkpoints.size() && checkpoints[c] + 1 < hi) hi = checkpoints[c] + 1;
        out.push_back({lo, hi});
        lo = hi;
    }
    return out;
}

void accumulate_segment(const SumRequest& req, std::uint64_t lo, const Workspace& ws,
                        const std::vector<std::uint8_t>& coprime_mask, ScaledAccumulator& acc) {
    const std::size_t len = ws.num.size();
    switch (req.mode) {
        case SumMode::full:
            for (std::size_t i = 0; i < len; ++i) acc.add(ws.num[i], ws.om[i]);
            break;
        case SumMode::coprime: {
            std::uint64_t r = lo % req.q;
            for (std::size_t i = 0; i < len; ++i) {
                if (coprime_mask[r]) acc.add(ws.num[i], ws.om[i]);
                if (++r == req.q) r = 0;
            }
            break;
        }
        case SumMode::progression: {
            const std::uint64_t a = req.a % req.q;
            const std::uint64_t r = lo % req.q;
            std::uint64_t i = (a + req.q - r) % req.q;
            for (; i < len; i += req.q) acc.add(ws.num[i], ws.om[i]);
            break;
        }
    }
}

}  // namespace

void for_each_D_k_segment(std::uint64_t x, unsigned k, const std::function<void(const DkSegment&)>& visit,
                          std::uint64_t segment_size) {
    if (x < 1) throw DomainError("x must be >= 1");
    const SegmentSieve sieve(x, k);
    Workspace ws;
    for (const auto& seg : plan_segments(x, segment_size, {})) {
        sieve.evaluate(seg.lo, seg.hi, ws);
        visit(DkSegment{seg.lo, ws.num, ws.om});
    }
}

void bulk_D_k(std::uint64_t x, unsigned k, const std::function<void(std::uint64_t, const ExactRational&)>& visit,
              std::uint64_t segment_size) {
    std::vector<i128> kpow(kMaxOmega + 1, 1);
    for (unsigned w = 1; w <= kMaxOmega; ++w) {
        if (!checked_mul(kpow[w - 1], i128{k}, kpow[w])) kpow[w] = 0;
    }
    for_each_D_k_segment(
        x, k,
        [&](const DkSegment& seg) {
            for (std::size_t i = 0; i < seg.numerators.size(); ++i) {
                const i128 den = kpow[seg.omegas[i]];
                if (den == 0) throw ArithmeticError("k^omega(n) exceeds 128 bits");
                visit(seg.start + i, ExactRational(static_cast<i128>(seg.numerators[i]), den));
            }
        },
        segment_size);
}

std::vector<ExactRational> bulk_D_k_values(std::uint64_t x, unsigned k) {
    std::vector<ExactRational> out;
    out.reserve(x);
    bulk_D_k(x, k, [&](std::uint64_t, const ExactRational& v) { out.push_back(v); });
    return out;
}

double main_term_coefficient(const SumRequest& request, const EulerOptions& opts) {
    switch (request.mode) {
        case SumMode::full: return compute_A_k(request.k, opts).value;
        case SumMode::coprime: return compute_G_k(request.q, request.k, opts).value;
        case SumMode::progression: return ap_leading_coefficient(request.q, request.k, opts);
    }
    return 0;
}

std::vector<SumResult> sum_at(const SumRequest& request, std::span<const std::uint64_t> grid,
                              const SieveOptions& opts) {
    if (grid.empty()) throw DomainError("grid must be nonempty");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (grid[i] <= grid[i - 1]) throw DomainError("grid must be strictly increasing");
    }
    SumRequest base = request;
    base.x = grid.back();
    if (grid.front() < 1) throw DomainError("x must be >= 1");
    base.validate();

    const double coefficient = main_term_coefficient(base, opts.euler);
    const SegmentSieve sieve(base.x, base.k);
    const auto segments = plan_segments(base.x, opts.segment_size, grid);

    std::vector<std::uint8_t> coprime_mask;
    if (base.mode == SumMode::coprime) {
        coprime_mask.resize(base.q);
        for (std::uint64_t r = 0; r < base.q; ++r) coprime_mask[r] = gcd_u64(r, base.q) == 1;
    }

    std::vector<ScaledAccumulator> partial(segments.size());
    for (auto& p : partial) p.set_k(base.k);
    run_parallel(segments.size(), opts.workers, [&](std::size_t t, Workspace& ws) {
        sieve.evaluate(segments[t].lo, segments[t].hi, ws);
        accumulate_segment(base, segments[t].lo, ws, coprime_mask, partial[t]);
    });

    std::vector<SumResult> out;
    out.reserve(grid.size());
    ScaledAccumulator total;
    total.set_k(base.k);
    std::size_t g = 0;
    for (std::size_t t = 0; t < segments.size(); ++t) {
        total.merge(partial[t]);
        while (g < grid.size() && grid[g] + 1 == segments[t].hi) {
            SumResult r;
            r.request = base;
            r.request.x = grid[g];
            r.exact = total.exact();
            r.approx = total.approx();
            r.approx_error_bound = total.error_bound();
            r.main_term = coefficient * static_cast<double>(grid[g]);
            r.residual = r.approx - r.main_term;
            out.push_back(std::move(r));
            ++g;
        }
    }
    return out;
}

SumResult sum(const SumRequest& request, const SieveOptions& opts) {
    const std::uint64_t grid[] = {request.x};
    request.validate();
    return std::move(sum_at(request, grid, opts).front());
}

SumResult sum_full(std::uint64_t x, unsigned k, const SieveOptions& opts) {
    return sum({.x = x, .k = k, .mode = SumMode::full}, opts);
}

SumResult sum_coprime(std::uint64_t x, unsigned k, std::uint64_t q, const SieveOptions& opts) {
    return sum({.x = x, .k = k, .q = q, .mode = SumMode::coprime}, opts);
}

SumResult sum_progression(std::uint64_t x, unsigned k, std::uint64_t q, std::uint64_t a, const SieveOptions& opts) {
    return sum({.x = x, .k = k, .q = q, .a = a, .mode = SumMode::progression}, opts);
}

ResidueClassSums residue_class_sums(std::uint64_t x, unsigned k, std::uint64_t q, const SieveOptions& opts) {
    SumRequest req{.x = x, .k = k, .q = q, .mode = SumMode::full};
    req.validate();
    const SegmentSieve sieve(x, k);
    const auto segments = plan_segments(x, opts.segment_size, {});
    std::vector<std::vector<ScaledAccumulator>> partial(segments.size(), std::vector<ScaledAccumulator>(q));
    for (auto& row : partial) {
        for (auto& acc : row) acc.set_k(k);
    }
    run_parallel(segments.size(), opts.workers, [&](std::size_t t, Workspace& ws) {
        sieve.evaluate(segments[t].lo, segments[t].hi, ws);
        auto& row = partial[t];
        std::uint64_t r = segments[t].lo % q;
        for (std::size_t i = 0; i < ws.num.size(); ++i) {
            row[r].add(ws.num[i], ws.om[i]);
            if (++r == q) r = 0;
        }
    });
    ResidueClassSums out;
    out.x = x;
    out.k = k;
    out.q = q;
    out.exact.resize(q);
    out.approx.resize(q);
    for (std::uint64_t r = 0; r < q; ++r) {
        ScaledAccumulator total;
        total.set_k(k);
        for (const auto& row : partial) total.merge(row[r]);
        out.exact[r] = total.exact();
        out.approx[r] = total.approx();
    }
    return out;
}

ExactRational sum_abs_g_k(std::uint64_t x, unsigned k) {
    if (x < 1) throw DomainError("x must be >= 1");
    DivisorParams{k};
    ScaledAccumulator acc;
    acc.set_k(k);
    for (const std::uint64_t n : powerful_numbers_up_to(x)) {
        const auto f = factorize(n);
        // g_k(n) = d_{k-1}(n) / k^omega(n) on the 2-full support.
        u128 num = 1;
        for (const auto& pm : f.factors()) {
            if (!checked_mul(num, d_k_prime_power(k - 1, pm.m), num) || num > UINT64_MAX) {
                throw ArithmeticError("sum_abs_g_k: d_{k-1}(n) exceeds 64 bits");
            }
        }
        acc.add(static_cast<std::uint64_t>(num), omega(f));
    }
    auto exact = acc.exact();
    if (!exact) throw ArithmeticError("sum_abs_g_k: exact sum exceeds 128 bits");
    return *exact;
}

AuxSum sum_g_over_d(std::uint64_t x, unsigned k, std::uint64_t q) {
    if (x < 1) throw DomainError("x must be >= 1");
    if (q < 1) throw DomainError("q must be >= 1");
    const DivisorParams params(k);
    AuxSum out;
    std::optional<ExactRational> exact = ExactRational(0);
    long double s = 0, c = 0;
    for (const std::uint64_t n : powerful_numbers_up_to(x)) {
        if (gcd_u64(n, q) != 1) continue;
        const auto f = factorize(n);
        const auto g = g_k(f, params);
        const long double v = g.to_long_double() / static_cast<long double>(n);
        const long double t = s + v;
        c += std::fabs(s) >= std::fabs(v) ? (s - t) + v : (v - t) + s;
        s = t;
        if (exact) {
            try {
                *exact += g / ExactRational(static_cast<i128>(n));
            } catch (const ArithmeticError&) {
                exact.reset();
            }
        }
    }
    out.exact = exact;
    out.approx = static_cast<double>(s + c);
    return out;
}

}  // namespace dkap

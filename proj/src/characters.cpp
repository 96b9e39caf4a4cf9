#include "dkap/characters.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <utility>

#include "dkap/arith.hpp"
#include "dkap/errors.hpp"

namespace dkap {

namespace detail {

struct GroupTables {
    std::uint64_t q = 1;
    std::uint64_t phi = 1;
    std::uint64_t exponent = 1;  // lcm of generator orders
    std::vector<Generator> generators;
    std::vector<std::uint8_t> unit;    // unit[r] for r in [0, q)
    std::vector<std::uint64_t> logs;   // logs[r * generators.size() + j]

    std::size_t rank() const { return generators.size(); }
    std::uint64_t reduce(std::int64_t n) const {
        const auto m = static_cast<std::int64_t>(q);
        return static_cast<std::uint64_t>(((n % m) + m) % m);
    }
};

}  // namespace detail

namespace {

using detail::GroupTables;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(u128{a} * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    while (e != 0) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

// Inverse of a mod m for gcd(a, m) = 1, by the extended Euclidean algorithm.
std::uint64_t invmod(std::uint64_t a, std::uint64_t m) {
    std::int64_t t = 0, new_t = 1;
    auto r = static_cast<std::int64_t>(m), new_r = static_cast<std::int64_t>(a % m);
    while (new_r != 0) {
        const std::int64_t quot = r / new_r;
        t = std::exchange(new_t, t - quot * new_t);
        r = std::exchange(new_r, r - quot * new_r);
    }
    if (t < 0) t += static_cast<std::int64_t>(m);
    return static_cast<std::uint64_t>(t);
}

std::uint64_t primitive_root_mod_prime(std::uint64_t p) {
    if (p == 2) return 1;
    const auto f = factorize(p - 1);
    for (std::uint64_t g = 2;; ++g) {
        bool ok = true;
        for (const auto& pm : f.factors()) {
            if (powmod(g, (p - 1) / pm.p, p) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) return g;
    }
}

// One cyclic factor of (Z/p^e Z)*: a generator modulo p^e with its order and
// the discrete log of every residue modulo p^e (units only).
struct LocalGenerator {
    std::uint64_t g;
    std::uint64_t order;
    std::vector<std::uint64_t> log;  // size p^e
};

struct Component {
    std::uint64_t modulus;  // p^e
    std::vector<LocalGenerator> gens;
};

Component build_component(std::uint64_t p, unsigned e) {
    std::uint64_t pe = 1;
    for (unsigned i = 0; i < e; ++i) pe *= p;
    Component c{pe, {}};
    if (p == 2) {
        if (e == 1) return c;
        if (e == 2) {
            LocalGenerator g{3, 2, std::vector<std::uint64_t>(pe, 0)};
            g.log[3] = 1;
            c.gens.push_back(std::move(g));
            return c;
        }
        // Odd r = (-1)^s 5^t mod 2^e.
        LocalGenerator minus{pe - 1, 2, std::vector<std::uint64_t>(pe, 0)};
        LocalGenerator five{5, pe / 4, std::vector<std::uint64_t>(pe, 0)};
        for (std::uint64_t s = 0; s < 2; ++s) {
            std::uint64_t v = s == 0 ? 1 : pe - 1;
            for (std::uint64_t t = 0; t < pe / 4; ++t) {
                minus.log[v] = s;
                five.log[v] = t;
                v = v * 5 % pe;
            }
        }
        c.gens.push_back(std::move(minus));
        c.gens.push_back(std::move(five));
        return c;
    }
    std::uint64_t g = primitive_root_mod_prime(p);
    if (e >= 2 && powmod(g, p - 1, p * p) == 1) g += p;
    const std::uint64_t order = pe / p * (p - 1);
    LocalGenerator lg{g % pe, order, std::vector<std::uint64_t>(pe, 0)};
    std::uint64_t v = 1;
    for (std::uint64_t i = 0; i < order; ++i) {
        lg.log[v] = i;
        v = mulmod(v, g, pe);
    }
    c.gens.push_back(std::move(lg));
    return c;
}

std::shared_ptr<const GroupTables> build_tables(std::uint64_t q) {
    if (q == 0) throw DomainError("character_group: q must be >= 1");
    auto t = std::make_shared<GroupTables>();
    t->q = q;
    t->phi = euler_phi(q);

    std::vector<Component> comps;
    const auto fq = factorize(q);
    for (const auto& pm : fq.factors()) comps.push_back(build_component(pm.p, pm.m));

    for (const auto& c : comps) {
        const std::uint64_t rest = q / c.modulus;
        // R = 1 (mod rest), R = g (mod p^e).
        const std::uint64_t inv = c.modulus == 1 ? 0 : invmod(rest % c.modulus, c.modulus);
        for (const auto& lg : c.gens) {
            const std::uint64_t tmul = mulmod((lg.g + c.modulus - 1) % c.modulus, inv, c.modulus);
            const std::uint64_t residue = (1 + static_cast<std::uint64_t>(u128{rest} * tmul % q)) % q;
            t->generators.push_back({residue, lg.order});
            t->exponent = std::lcm(t->exponent, lg.order);
        }
    }

    const std::size_t rank = t->generators.size();
    t->unit.assign(q, 0);
    t->logs.assign(q * rank, 0);
    for (std::uint64_t r = 0; r < q; ++r) {
        if (std::gcd(r, q) != 1) continue;
        t->unit[r] = 1;
        std::size_t j = 0;
        for (const auto& c : comps) {
            for (const auto& lg : c.gens) t->logs[r * rank + j++] = lg.log[r % c.modulus];
        }
    }
    return t;
}

std::uint64_t exponent_of(const GroupTables& t, std::span<const std::uint64_t> exps, std::uint64_t r) {
    const std::size_t rank = t.rank();
    u128 e = 0;
    for (std::size_t j = 0; j < rank; ++j) {
        e += u128{exps[j]} * t.logs[r * rank + j] % t.generators[j].order * (t.exponent / t.generators[j].order);
    }
    return static_cast<std::uint64_t>(e % t.exponent);
}

// cos/sin of 2 pi e / order for e in [0, order).
struct RootTable {
    std::vector<long double> re, im;
    explicit RootTable(std::uint64_t order) : re(order), im(order) {
        for (std::uint64_t e = 0; e < order; ++e) {
            const auto v = RootOfUnity{false, e, order}.render();
            re[e] = v.re;
            im[e] = v.im;
        }
    }
};

void require_unit(std::uint64_t q, std::int64_t a) {
    const auto m = static_cast<std::int64_t>(q);
    const auto r = static_cast<std::uint64_t>(((a % m) + m) % m);
    if (std::gcd(r, q) != 1) {
        throw DomainError("gcd(a, q) must be 1 (got a=" + std::to_string(a) + ", q=" + std::to_string(q) + ")");
    }
}

}  // namespace

ComplexValue RootOfUnity::render() const {
    if (zero) return {0, 0};
    const std::uint64_t e = exponent % order;
    if (e == 0) return {1, 0};
    if (2 * e == order) return {-1, 0};
    if (4 * e == order) return {0, 1};
    if (4 * e == 3 * order) return {0, -1};
    const long double angle = 2 * std::numbers::pi_v<long double> * static_cast<long double>(e) /
                              static_cast<long double>(order);
    return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
}

std::uint64_t Character::q() const { return tables_->q; }
std::uint64_t Character::value_order() const { return tables_->exponent; }

RootOfUnity Character::value(std::int64_t n) const {
    const std::uint64_t r = tables_->reduce(n);
    if (!tables_->unit[r]) return {true, 0, tables_->exponent};
    return {false, exponent_of(*tables_, exponents_, r), tables_->exponent};
}

std::vector<std::uint64_t> Character::exponent_table() const {
    std::vector<std::uint64_t> out(tables_->q, kNonUnit);
    for (std::uint64_t r = 0; r < tables_->q; ++r) {
        if (tables_->unit[r]) out[r] = exponent_of(*tables_, exponents_, r);
    }
    return out;
}

CharacterGroup::CharacterGroup(std::uint64_t q) : tables_(build_tables(q)) {
    const auto& gens = tables_->generators;
    characters_.reserve(tables_->phi);
    std::vector<std::uint64_t> exps(gens.size(), 0);
    for (std::size_t index = 0; index < tables_->phi; ++index) {
        Character c;
        c.tables_ = tables_;
        c.index_ = index;
        c.exponents_ = exps;
        c.principal_ = std::all_of(exps.begin(), exps.end(), [](std::uint64_t e) { return e == 0; });
        characters_.push_back(std::move(c));
        for (std::size_t j = gens.size(); j-- > 0;) {
            if (++exps[j] < gens[j].order) break;
            exps[j] = 0;
        }
    }
}

std::uint64_t CharacterGroup::q() const { return tables_->q; }
std::uint64_t CharacterGroup::phi() const { return tables_->phi; }
std::uint64_t CharacterGroup::exponent() const { return tables_->exponent; }
std::span<const Generator> CharacterGroup::generators() const { return tables_->generators; }

std::size_t CharacterGroup::conjugate_index(std::size_t i) const {
    const auto& exps = characters_.at(i).exponents_;
    const auto& gens = tables_->generators;
    std::size_t index = 0;
    for (std::size_t j = 0; j < gens.size(); ++j) index = index * gens[j].order + (gens[j].order - exps[j]) % gens[j].order;
    return index;
}

CharacterGroup character_group(std::uint64_t q) { return CharacterGroup(q); }

ComplexValue char_value(const Character& chi, std::int64_t n) { return chi.value(n).render(); }

double orthogonality_indicator(const CharacterGroup& group, std::int64_t a, std::int64_t n) {
    require_unit(group.q(), a);
    const RootTable roots(group.exponent());
    const std::uint64_t order = group.exponent();
    long double re = 0, im = 0;
    for (const auto& chi : group.characters()) {
        const auto vn = chi.value(n);
        if (vn.zero) continue;
        const auto va = chi.value(a);
        const std::uint64_t d = (vn.exponent + order - va.exponent) % order;
        re += roots.re[d];
        im += roots.im[d];
    }
    return static_cast<double>(re / static_cast<long double>(group.phi()));
}

double orthogonality_indicator(std::uint64_t q, std::int64_t a, std::int64_t n) {
    return orthogonality_indicator(CharacterGroup(q), a, n);
}

ComplexValue char_partial_sum(const Character& chi, std::uint64_t y) {
    const std::uint64_t q = chi.q();
    const std::uint64_t order = chi.value_order();
    const auto table = chi.exponent_table();
    std::vector<u128> counts(order, 0);
    std::vector<u128> period(order, 0);
    for (std::uint64_t m = 1; m <= q; ++m) {
        const std::uint64_t e = table[m % q];
        if (e != Character::kNonUnit) ++period[e];
    }
    const std::uint64_t full = y / q;
    for (std::uint64_t e = 0; e < order; ++e) counts[e] = period[e] * full;
    for (std::uint64_t m = 1; m <= y % q; ++m) {
        const std::uint64_t e = table[m % q];
        if (e != Character::kNonUnit) ++counts[e];
    }
    const RootTable roots(order);
    long double re = 0, im = 0;
    for (std::uint64_t e = 0; e < order; ++e) {
        if (counts[e] == 0) continue;
        re += static_cast<long double>(counts[e]) * roots.re[e];
        im += static_cast<long double>(counts[e]) * roots.im[e];
    }
    return {static_cast<double>(re), static_cast<double>(im)};
}

ComplexValue twisted_sum(const Character& chi, const ResidueClassSums& classes) {
    if (classes.q != chi.q()) throw DomainError("twisted_sum: residue classes were computed for another modulus");
    const std::uint64_t order = chi.value_order();
    const auto table = chi.exponent_table();
    // Exact per-exponent totals while they fit; long double otherwise.
    std::vector<std::optional<ExactRational>> exact(order, ExactRational(0));
    std::vector<long double> approx(order, 0);
    for (std::uint64_t r = 0; r < classes.q; ++r) {
        const std::uint64_t e = table[r];
        if (e == Character::kNonUnit) continue;
        approx[e] += classes.approx[r];
        if (!exact[e]) continue;
        if (!classes.exact[r]) {
            exact[e].reset();
            continue;
        }
        try {
            *exact[e] += *classes.exact[r];
        } catch (const ArithmeticError&) {
            exact[e].reset();
        }
    }
    const RootTable roots(order);
    long double re = 0, im = 0;
    for (std::uint64_t e = 0; e < order; ++e) {
        const long double v = exact[e] ? exact[e]->to_long_double() : approx[e];
        re += v * roots.re[e];
        im += v * roots.im[e];
    }
    return {static_cast<double>(re), static_cast<double>(im)};
}

ComplexValue twisted_sum(const Character& chi, std::uint64_t x, unsigned k, const SieveOptions& opts) {
    return twisted_sum(chi, residue_class_sums(x, k, chi.q(), opts));
}

double ap_sum_via_characters(const CharacterGroup& group, const ResidueClassSums& classes, std::uint64_t a) {
    require_unit(group.q(), static_cast<std::int64_t>(a));
    long double re = 0, im = 0;
    for (const auto& chi : group.characters()) {
        const auto s = twisted_sum(chi, classes);
        const auto ca = chi.value(static_cast<std::int64_t>(a)).render();
        // conj(chi(a)) * s
        re += static_cast<long double>(ca.re) * s.re + static_cast<long double>(ca.im) * s.im;
        im += static_cast<long double>(ca.re) * s.im - static_cast<long double>(ca.im) * s.re;
    }
    const long double phi = group.phi();
    re /= phi;
    im /= phi;
    if (std::fabs(im) > 1e-8L * std::max(std::fabs(re), 1.0L)) {
        throw NumericalError("ap_sum_via_characters: imaginary residue " + std::to_string(static_cast<double>(im)) +
                             " exceeds tolerance");
    }
    return static_cast<double>(re);
}

double ap_sum_via_characters(std::uint64_t x, unsigned k, std::uint64_t q, std::uint64_t a, const SieveOptions& opts) {
    if (q == 0) throw DomainError("q must be >= 1");
    require_unit(q, static_cast<std::int64_t>(a));
    const CharacterGroup group(q);
    return ap_sum_via_characters(group, residue_class_sums(x, k, q, opts), a);
}

double pv_ratio(std::uint64_t q) {
    if (q < 3) throw DomainError("pv_ratio: q must be >= 3");
    const CharacterGroup group(q);
    const RootTable roots(group.exponent());
    long double best = 0;
    for (const auto& chi : group.characters()) {
        if (chi.is_principal()) continue;
        const auto table = chi.exponent_table();
        long double re = 0, im = 0;
        for (std::uint64_t y = 1; y <= q; ++y) {
            const std::uint64_t e = table[y % q];
            if (e != Character::kNonUnit) {
                re += roots.re[e];
                im += roots.im[e];
            }
            best = std::max(best, std::hypot(re, im));
        }
    }
    return static_cast<double>(best / (std::sqrt(static_cast<long double>(q)) * std::log(static_cast<long double>(q))));
}

}  // namespace dkap

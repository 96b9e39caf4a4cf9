#include "dkap/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>
#include <thread>

#include "dkap/acceptance.hpp"
#include "dkap/arith.hpp"
#include "dkap/characters.hpp"
#include "dkap/divisor.hpp"
#include "dkap/errors.hpp"
#include "dkap/euler.hpp"
#include "dkap/experiments.hpp"
#include "dkap/sieve.hpp"

namespace dkap::cli {

namespace {

enum class Format { plain, csv, json };

struct Config {
    Format format = Format::plain;
    std::uint64_t prime_limit = kDefaultPrimeLimit;
    double epsilon = kDefaultEpsilon;
    std::uint64_t segment_size = SieveOptions{}.segment_size;
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::string output_path;

    SieveOptions sieve() const {
        SieveOptions o;
        o.segment_size = segment_size;
        o.workers = workers;
        o.euler.prime_limit = prime_limit;
        return o;
    }
    EulerOptions euler() const { return {.prime_limit = prime_limit}; }
};

// A table of named columns rendered as plain "key=value" lines, CSV, or a JSON array.
class Table {
public:
    explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}
    void add(std::vector<nlohmann::json> row) { rows_.push_back(std::move(row)); }

    void print(std::ostream& os, Format f) const {
        switch (f) {
            case Format::csv:
                for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
                os << '\n';
                for (const auto& row : rows_) {
                    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell(row[i]);
                    os << '\n';
                }
                break;
            case Format::plain:
                for (const auto& row : rows_) {
                    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? " " : "") << columns_[i] << '=' << cell(row[i]);
                    os << '\n';
                }
                break;
            case Format::json: {
                auto arr = nlohmann::json::array();
                for (const auto& row : rows_) {
                    nlohmann::json obj;
                    for (std::size_t i = 0; i < row.size(); ++i) obj[columns_[i]] = row[i];
                    arr.push_back(std::move(obj));
                }
                os << (arr.size() == 1 ? arr[0] : arr).dump(2) << '\n';
                break;
            }
        }
    }

private:
    static std::string cell(const nlohmann::json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number_float()) return format_double(v.get<double>());
        if (v.is_null()) return "";
        return v.dump();
    }

    std::vector<std::string> columns_;
    std::vector<std::vector<nlohmann::json>> rows_;
};

nlohmann::json num(double v) {
    // JSON output keeps 17 significant digits through the string form.
    return nlohmann::json(v);
}

std::vector<std::uint64_t> parse_grid(const std::string& text) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        double v;
        try {
            v = std::stod(item);
        } catch (const std::exception&) {
            throw DomainError("malformed grid value: " + item);
        }
        if (!(v >= 1)) throw DomainError("grid values must be >= 1");
        out.push_back(static_cast<std::uint64_t>(std::llround(v)));
    }
    if (out.empty()) throw DomainError("grid must be nonempty");
    return out;
}

std::string output_dir(const Config& cfg) {
    if (!cfg.output_path.empty()) return cfg.output_path;
    if (const char* env = std::getenv(kOutputDirEnv)) return env;
    return {};
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path);
    if (!f) throw ResourceError("cannot open " + path.string() + " for writing");
    body(f);
}

// Emits to `out`, or to the file named by --out when given.
void emit(const Config& cfg, std::ostream& out, const std::function<void(std::ostream&)>& body) {
    if (cfg.output_path.empty()) {
        body(out);
    } else {
        write_file(cfg.output_path, body);
    }
}

std::string fraction_or_int(u128 v) { return to_string(v); }

int cmd_eval(const Config& cfg, std::uint64_t n, unsigned k, std::ostream& out) {
    const DivisorParams params(k);
    const auto f = factorize(n);
    const auto dk = d_k(f, params), ds = d_star(f, params);
    const auto Dk = D_k(f, params), gk = g_k(f, params);
    if (cfg.format == Format::plain) {
        emit(cfg, out, [&](std::ostream& os) {
            os << "d_k=" << fraction_or_int(dk) << " d_k*=" << fraction_or_int(ds) << " D_k=" << Dk.str()
               << " g_k=" << gk.str() << '\n';
        });
        return kOk;
    }
    Table t({"n", "k", "d_k", "d_k_star", "D_k", "g_k"});
    t.add({std::to_string(n), k, fraction_or_int(dk), fraction_or_int(ds), Dk.str(), gk.str()});
    emit(cfg, out, [&](std::ostream& os) { t.print(os, cfg.format); });
    return kOk;
}

int cmd_sum(const Config& cfg, const SumRequest& req, std::ostream& out) {
    const auto r = sum(req, cfg.sieve());
    Table t({"mode", "x", "k", "q", "a", "exact", "approx", "approx_error_bound", "main_term", "residual"});
    t.add({std::string(to_string(req.mode)), std::to_string(req.x), req.k, std::to_string(req.q),
           req.mode == SumMode::progression ? nlohmann::json(std::to_string(req.a)) : nlohmann::json(nullptr),
           r.exact ? nlohmann::json(r.exact->str()) : nlohmann::json(nullptr), num(r.approx),
           num(r.approx_error_bound), num(r.main_term), num(r.residual)});
    emit(cfg, out, [&](std::ostream& os) { t.print(os, cfg.format); });
    return kOk;
}

int cmd_coeff(const Config& cfg, unsigned k, std::uint64_t q, std::ostream& out) {
    DivisorParams{k};
    const auto opts = cfg.euler();
    const auto a = compute_A_k(k, opts);
    const auto g = compute_G_k(q, k, opts);
    Table t({"k", "q", "A_k", "G_k", "G_k_over_phi", "prime_limit", "tail_bound"});
    t.add({k, std::to_string(q), num(a.value), num(g.value), num(g.value / static_cast<double>(euler_phi(q))),
           std::to_string(a.prime_limit), num(a.tail_bound)});
    emit(cfg, out, [&](std::ostream& os) { t.print(os, cfg.format); });
    return kOk;
}

int cmd_characters(const Config& cfg, std::uint64_t q, std::ostream& out) {
    const CharacterGroup group(q);
    Table t({"char_index", "n", "value_re", "value_im"});
    for (const auto& chi : group.characters()) {
        for (std::uint64_t n = 1; n <= q; ++n) {
            const auto v = char_value(chi, static_cast<std::int64_t>(n));
            t.add({chi.index(), std::to_string(n), num(v.re), num(v.im)});
        }
    }
    // The character table is CSV unless another machine format was requested.
    const Format f = cfg.format == Format::json ? Format::json : Format::csv;
    emit(cfg, out, [&](std::ostream& os) { t.print(os, f); });
    return kOk;
}

int cmd_table(const Config& cfg, const std::string& which, std::ostream& out) {
    if (which == "a") {
        const auto report = reproduce_A_table(cfg.prime_limit);
        emit(cfg, out, [&](std::ostream& os) { write_a_table_csv(os, report); });
        return kOk;
    }
    if (which == "g") {
        const auto report = reproduce_G_table(cfg.prime_limit);
        emit(cfg, out, [&](std::ostream& os) { write_g_table_csv(os, report); });
        return kOk;
    }
    throw DomainError("table must be 'a' or 'g'");
}

int cmd_error_curve(const Config& cfg, unsigned k, std::uint64_t q, std::uint64_t a, SumMode mode,
                    const std::string& grid_text, std::ostream& out) {
    const auto grid = grid_text.empty() ? default_error_grid() : parse_grid(grid_text);
    const auto curve = error_curve(k, q, a, grid, mode, cfg.epsilon, cfg.sieve());
    emit(cfg, out, [&](std::ostream& os) { write_csv(os, curve); });
    return kOk;
}

// All experiment CSV files into dir.
void write_reports(const Config& cfg, const std::filesystem::path& dir) {
    write_file(dir / "a_table.csv", [&](std::ostream& os) { write_a_table_csv(os, reproduce_A_table(cfg.prime_limit)); });
    write_file(dir / "g_table.csv", [&](std::ostream& os) { write_g_table_csv(os, reproduce_G_table(cfg.prime_limit)); });
    const auto grid = default_error_grid();
    for (unsigned k : {2u, 3u}) {
        for (std::uint64_t q : {3ull, 4ull, 5ull}) {
            for (std::uint64_t a = 1; a <= q; ++a) {
                if (gcd_u64(a, q) != 1) continue;
                const auto curve = error_curve(k, q, a, grid, SumMode::progression, cfg.epsilon, cfg.sieve());
                const auto name = "error_curve_" + std::to_string(k) + "_" + std::to_string(q) + "_" + std::to_string(a) + ".csv";
                write_file(dir / name, [&](std::ostream& os) { write_csv(os, curve); });
            }
        }
    }
    const std::uint64_t growth_grid[] = {100, 10'000, 1'000'000};
    std::vector<GrowthReport> growth;
    for (unsigned k : {2u, 3u, 4u}) growth.push_back(growth_check_abs_g(k, growth_grid));
    write_file(dir / "growth_gk.csv", [&](std::ostream& os) { write_csv(os, std::span<const GrowthReport>(growth)); });
    const std::uint64_t density_grid[] = {100, 1'000, 10'000, 100'000, 1'000'000};
    const auto density = powerful_density_check(density_grid);
    write_file(dir / "powerful_density.csv", [&](std::ostream& os) { write_csv(os, std::span<const DensityRow>(density)); });
}

int cmd_verify(const Config& cfg, bool skip_perf, std::ostream& out) {
    AcceptanceOptions opts;
    opts.include_performance = !skip_perf;
    opts.workers = cfg.workers;
    opts.on_result = [&](const CriterionResult& r) { out << format_result_line(r) << std::endl; };
    const auto results = run_acceptance(opts);
    const auto passed = std::count_if(results.begin(), results.end(), [](const auto& r) { return r.pass; });
    out << passed << "/" << results.size() << " criteria passed\n";
    if (const auto dir = output_dir(cfg); !dir.empty()) write_reports(cfg, dir);
    return passed == static_cast<long>(results.size()) ? kOk : kVerificationFailure;
}

int cmd_report(const Config& cfg, std::ostream& out) {
    const auto dir = output_dir(cfg);
    if (dir.empty()) throw DomainError(std::string("report needs --out DIR or ") + kOutputDirEnv);
    write_reports(cfg, dir);
    out << "reports written to " << dir << '\n';
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sums of D_k(n) = d_k(n)/k^omega(n) over intervals, coprime classes and arithmetic progressions"};
    app.require_subcommand(1);
    app.fallthrough();

    Config cfg;
    std::string format = "plain";
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"plain", "csv", "json"}));
    app.add_option("--prime-limit", cfg.prime_limit, "Largest prime in truncated Euler products")->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 40));
    app.add_option("--epsilon", cfg.epsilon, "Exponent slack in normalized residuals");
    app.add_option("--segment-size", cfg.segment_size, "Sieve segment length")->check(CLI::PositiveNumber);
    app.add_option("--workers", cfg.workers, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--out", cfg.output_path, "Output file (or directory for verify/report)");

    std::uint64_t n = 0, x = 0, q = 0, a = 0;
    unsigned k = 2;
    std::string which, grid, mode_text = "progression";
    bool skip_perf = false;

    auto* eval = app.add_subcommand("eval", "d_k, d_k*, D_k and g_k at n as exact fractions");
    eval->add_option("n", n)->required()->check(CLI::PositiveNumber);
    eval->add_option("--k", k)->required();

    auto* sum_cmd = app.add_subcommand("sum", "Exact sum of D_k(n) over n <= x with its main term");
    sum_cmd->add_option("--x", x)->required()->check(CLI::PositiveNumber);
    sum_cmd->add_option("--k", k)->required();
    auto* q_opt = sum_cmd->add_option("--q", q, "Modulus: coprime sum, or progression with --a");
    auto* a_opt = sum_cmd->add_option("--a", a, "Residue class (needs --q)");
    a_opt->needs(q_opt);

    auto* coeff = app.add_subcommand("coeff", "A_k, G_k(q), G_k(q)/phi(q) with the truncation tail bound");
    coeff->add_option("--k", k)->required();
    std::uint64_t coeff_q = 1;
    coeff->add_option("--q", coeff_q)->check(CLI::PositiveNumber);

    auto* chars = app.add_subcommand("characters", "Dirichlet character table mod q as CSV");
    std::uint64_t char_q = 1;
    chars->add_option("--q", char_q)->required()->check(CLI::PositiveNumber);

    auto* table = app.add_subcommand("table", "Reproduce the A_k table (a) or the G_k(q)/phi(q) table (g)");
    table->add_option("which", which)->required()->check(CLI::IsMember({"a", "g"}));

    auto* verify = app.add_subcommand("verify", "Run the acceptance matrix");
    verify->add_flag("--skip-performance", skip_perf, "Skip the timed large sums");

    auto* curve = app.add_subcommand("error-curve", "Residuals of the sum against its main term over an x grid");
    std::uint64_t curve_q = 1, curve_a = 1;
    curve->add_option("--k", k)->required();
    curve->add_option("--q", curve_q)->check(CLI::PositiveNumber);
    curve->add_option("--a", curve_a)->check(CLI::PositiveNumber);
    curve->add_option("--grid", grid, "Comma-separated x values (default 1e4..1e6, ratio ~3)");
    curve->add_option("--mode", mode_text)->check(CLI::IsMember({"full", "coprime", "progression"}));

    auto* report = app.add_subcommand("report", "Write every experiment CSV into --out DIR");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kDomainError;
    }

    cfg.format = format == "csv" ? Format::csv : format == "json" ? Format::json : Format::plain;

    try {
        if (*eval) return cmd_eval(cfg, n, k, out);
        if (*sum_cmd) {
            SumRequest req{.x = x, .k = k, .q = 1, .a = 1, .mode = SumMode::full};
            if (*q_opt) {
                req.q = q;
                req.mode = SumMode::coprime;
            }
            if (*a_opt) {
                req.a = a;
                req.mode = SumMode::progression;
            }
            return cmd_sum(cfg, req, out);
        }
        if (*coeff) return cmd_coeff(cfg, k, coeff_q, out);
        if (*chars) return cmd_characters(cfg, char_q, out);
        if (*table) return cmd_table(cfg, which, out);
        if (*verify) return cmd_verify(cfg, skip_perf, out);
        if (*curve) {
            const SumMode mode = mode_text == "full"      ? SumMode::full
                                 : mode_text == "coprime" ? SumMode::coprime
                                                          : SumMode::progression;
            return cmd_error_curve(cfg, k, curve_q, curve_a, mode, grid, out);
        }
        if (*report) return cmd_report(cfg, out);
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kDomainError;
    } catch (const ResourceError& e) {
        err << "error: " << e.what() << '\n';
        return kResourceError;
    } catch (const ArithmeticError& e) {
        err << "error: " << e.what() << '\n';
        return kResourceError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kResourceError;
    }
    return kDomainError;
}

}  // namespace dkap::cli

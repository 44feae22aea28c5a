#pragma once

// Command-line front end. run() parses argv, writes results to `out` and a
// single-line diagnostic to `err`, and returns the process exit code:
// 0 success, 1 computation error, 2 usage error.

#include "amcount/asymptotics.hpp"
#include "amcount/constants.hpp"
#include "amcount/counting.hpp"
#include "amcount/errors.hpp"
#include "amcount/integer.hpp"
#include "amcount/matula.hpp"
#include "amcount/prime_count.hpp"
#include "amcount/primes.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <new>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace amc::cli {

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// 15 significant digits, '.' separator; non-finite values print as nan/inf/-inf.
inline std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

inline std::string json_real(double v) { return std::isfinite(v) ? format_real(v) : "null"; }
inline std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

/// Parses a non-negative integer written in decimal or scientific notation
/// ("1000", "1e9", "2.5e3"); the value must be an exact integer.
inline u128 parse_exact_integer(std::string_view text, std::string_view what) {
    auto fail = [&](const std::string& why) {
        return UsageError(std::string(what) + ": '" + std::string(text) + "' " + why);
    };
    std::string digits;
    std::size_t i = 0;
    bool seen_point = false;
    long long frac_digits = 0;
    for (; i < text.size() && text[i] != 'e' && text[i] != 'E'; ++i) {
        char ch = text[i];
        if (ch == '.' && !seen_point) {
            seen_point = true;
        } else if (std::isdigit(static_cast<unsigned char>(ch))) {
            digits.push_back(ch);
            if (seen_point) ++frac_digits;
        } else {
            throw fail("is not a number");
        }
    }
    if (digits.empty()) throw fail("is not a number");
    long long exponent = 0;
    if (i < text.size()) {
        std::string_view e = text.substr(i + 1);
        bool neg = false;
        if (!e.empty() && (e[0] == '+' || e[0] == '-')) {
            neg = e[0] == '-';
            e.remove_prefix(1);
        }
        if (e.empty() || e.size() > 4) throw fail("has a malformed exponent");
        for (char ch : e) {
            if (!std::isdigit(static_cast<unsigned char>(ch))) throw fail("has a malformed exponent");
            exponent = exponent * 10 + (ch - '0');
        }
        if (neg) exponent = -exponent;
    }
    exponent -= frac_digits;
    while (exponent < 0) {
        if (digits.back() != '0') throw fail("is not an integer");
        digits.pop_back();
        ++exponent;
        if (digits.empty()) digits = "0";
    }
    digits.append(static_cast<std::size_t>(exponent), '0');
    const u128 max = ~u128{0};
    u128 v = 0;
    for (char ch : digits) {
        auto d = static_cast<unsigned>(ch - '0');
        if (v > (max - d) / 10) throw fail("is too large");
        v = v * 10 + d;
    }
    return v;
}

inline std::uint64_t parse_u64(std::string_view text, std::string_view what) {
    u128 v = parse_exact_integer(text, what);
    if (v > ~std::uint64_t{0}) throw UsageError(std::string(what) + ": '" + std::string(text) + "' is too large");
    return static_cast<std::uint64_t>(v);
}

inline double parse_real(std::string_view text, std::string_view what) {
    std::string s(text);
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v))
        throw UsageError(std::string(what) + ": '" + s + "' is not a finite number");
    return v;
}

inline BigInt parse_big(std::string_view text, std::string_view what) {
    if (text.empty() || !std::all_of(text.begin(), text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        return to_big(parse_exact_integer(text, what));
    return BigInt(std::string(text));
}

struct Settings {
    std::uint64_t sieve_limit = kDefaultSieveLimit;
    std::string sieve_cache;
    double tol = 1e-8;
    std::string format;  // "", "csv" or "json"
};

/// Builds (or loads from the cache file) a table of at least
/// min(need, sieve_limit).
class TableSource {
public:
    explicit TableSource(const Settings& s) : s_(&s) {}

    const PrimeTable& get(std::uint64_t need) {
        std::uint64_t want = std::max<std::uint64_t>(std::min(need, s_->sieve_limit), 2);
        if (table_ && table_->limit() >= want) return *table_;
        if (!s_->sieve_cache.empty() && std::filesystem::exists(s_->sieve_cache)) {
            PrimeTable t = PrimeTable::load(s_->sieve_cache);
            if (t.limit() >= want) {
                table_ = std::move(t);
                return *table_;
            }
        }
        table_ = PrimeTable::build(want);
        if (!s_->sieve_cache.empty()) table_->save(s_->sieve_cache);
        return *table_;
    }

    const PrimeTable& full() { return get(s_->sieve_limit); }

    /// Calls fn with tables of growing size until it stops throwing
    /// CapacityError or the sieve limit is reached.
    template <class Fn>
    auto with_growing(Fn&& fn) {
        std::uint64_t need = std::min<std::uint64_t>(1u << 20, s_->sieve_limit);
        for (;;) {
            try {
                return fn(get(need));
            } catch (const CapacityError&) {
                if (need >= s_->sieve_limit) throw;
                need = std::min(need * 16, s_->sieve_limit);
            }
        }
    }

private:
    const Settings* s_;
    std::optional<PrimeTable> table_;
};

/// Rows of named columns, printed as CSV (header always) or a JSON array.
class Table {
public:
    explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    // each cell: text plus whether it is a JSON string
    void add(std::vector<std::pair<std::string, bool>> row) { rows_.push_back(std::move(row)); }

    void print(std::ostream& out, bool json) const {
        if (json) {
            out << '[';
            for (std::size_t r = 0; r < rows_.size(); ++r) {
                out << (r ? "," : "") << '{';
                for (std::size_t c = 0; c < columns_.size(); ++c) {
                    const auto& [text, quoted] = rows_[r][c];
                    out << (c ? "," : "") << json_string(columns_[c]) << ':' << (quoted ? json_string(text) : text);
                }
                out << '}';
            }
            out << "]\n";
            return;
        }
        for (std::size_t c = 0; c < columns_.size(); ++c) out << (c ? "," : "") << columns_[c];
        out << '\n';
        for (const auto& row : rows_) {
            for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_cell(row[c].first);
            out << '\n';
        }
    }

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::pair<std::string, bool>>> rows_;

    static std::string csv_cell(const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char ch : s) {
            if (ch == '"') q += '"';
            q += ch;
        }
        return q + '"';
    }
};

inline std::pair<std::string, bool> num(double v) { return {format_real(v), false}; }
inline std::pair<std::string, bool> num_json(double v) { return {json_real(v), false}; }
inline std::pair<std::string, bool> integer(const std::string& v) { return {v, false}; }
inline std::pair<std::string, bool> text(const std::string& v) { return {v, true}; }
inline std::pair<std::string, bool> boolean(bool v) { return {v ? "true" : "false", false}; }

inline std::vector<double> parse_real_list(const std::vector<std::string>& items, std::string_view what) {
    std::vector<double> out;
    for (const auto& s : items) out.push_back(parse_real(s, what));
    return out;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Settings st;
    CLI::App app{"Exact counts and asymptotics for integers built from the primes p_{m^k}", "amcount"};
    app.require_subcommand(1);
    std::string sieve_limit_text;
    app.add_option("--sieve-limit", sieve_limit_text, "Largest sieved integer (default 2^30)")
        ->envname("AMC_SIEVE_LIMIT");
    app.add_option("--sieve-cache", st.sieve_cache, "Prime table cache file")->envname("AMC_SIEVE_CACHE");
    std::string tol_text;
    app.add_option("--tol", tol_text, "Target error bound for constants (default 1e-8)");
    app.add_option("--format", st.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

    int m = 2;
    std::string x_text;
    std::vector<std::string> list;
    bool integers = false;

    auto* count = app.add_subcommand("count", "Exact M_{2,m}(x)");
    count->add_option("--m", m, "Index base m >= 2")->check(CLI::Range(2, 1 << 20));
    count->add_option("--x", x_text, "Upper bound (integer, scientific notation allowed)")->required();

    auto* enumerate = app.add_subcommand("enumerate", "List the members of A_m up to x");
    enumerate->add_option("--m", m)->check(CLI::Range(2, 1 << 20));
    enumerate->add_option("--x", x_text)->required();

    auto* asym = app.add_subcommand("asym", "Strong and weak asymptotic log M_{2,m}(x)");
    asym->add_option("--m", m)->check(CLI::Range(2, 1 << 20));
    asym->add_option("--x", x_text)->required();

    auto* constants = app.add_subcommand("constants", "Constants with error bounds");
    constants->add_option("--m", m)->check(CLI::Range(2, 1 << 20));
    constants->add_option("--tol", tol_text, "Target error bound");

    auto* matula = app.add_subcommand("matula", "Matula coding of rooted trees");
    matula->require_subcommand(1);
    std::string matula_arg;
    auto* encode_cmd = matula->add_subcommand("encode", "Tree in parenthesis notation to its code");
    encode_cmd->add_option("tree", matula_arg, "e.g. (()(()))")->required();
    auto* decode_cmd = matula->add_subcommand("decode", "Code to tree");
    decode_cmd->add_option("n", matula_arg, "Positive integer")->required();

    auto* verify = app.add_subcommand("verify", "Numerical witnesses of the expansions");
    verify->require_subcommand(1);
    auto* v31 = verify->add_subcommand("lemma31", "Laplace-side residual against D'");
    v31->add_option("--m", m)->check(CLI::Range(2, 1 << 20));
    v31->add_option("--sigmas", list, "Comma-separated sigma values")->delimiter(',');
    v31->add_flag("--integers", integers, "Use the system lambda_k = k + 1");
    auto* v44 = verify->add_subcommand("lemma44", "Averaged step counter residual against D_m");
    v44->add_option("--m", m)->check(CLI::Range(2, 1 << 20));
    v44->add_option("--us", list, "Comma-separated u values")->delimiter(',');
    v44->add_flag("--integers", integers, "Use the system lambda_k = k + 1");
    auto* vhr = verify->add_subcommand("hr", "Partition sums against the Tauberian formula");
    vhr->add_option("--u", x_text, "Partition bound u")->required();

    auto* compare = app.add_subcommand("compare", "Exact counts against the asymptotics");
    compare->add_option("--m", m)->check(CLI::Range(2, 1 << 20));
    compare->add_option("--xs", list, "Comma-separated x values")->delimiter(',')->required();

    auto* primes = app.add_subcommand("primes", "Prime queries");
    primes->require_subcommand(1);
    std::string prime_arg;
    auto* nth = primes->add_subcommand("nth", "The i-th prime");
    nth->add_option("i", prime_arg)->required();
    auto* pi = primes->add_subcommand("pi", "Number of primes <= n");
    pi->add_option("n", prime_arg)->required();

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, eo;
        int rc = app.exit(e, o, eo);
        out << o.str();
        std::string msg = eo.str();
        if (rc != 0) {
            auto nl = msg.find('\n');
            err << "usage error: " << msg.substr(0, nl) << '\n';
            return 2;
        }
        err << msg;
        return 0;
    }

    try {
        if (!sieve_limit_text.empty()) st.sieve_limit = parse_u64(sieve_limit_text, "--sieve-limit");
        if (!tol_text.empty()) {
            st.tol = parse_real(tol_text, "--tol");
            if (!(st.tol > 0)) throw UsageError("--tol must be positive");
        }
        if (st.sieve_limit < 2) throw UsageError("--sieve-limit must be at least 2");
        const bool json = st.format == "json";
        TableSource tables(st);

        if (*count) {
            u128 x = parse_exact_integer(x_text, "--x");
            if (x < 1) throw UsageError("--x must be at least 1");
            std::uint64_t need = x <= st.sieve_limit ? std::max<std::uint64_t>(static_cast<std::uint64_t>(x), 1u << 16)
                                                     : st.sieve_limit;
            const PrimeTable& t = tables.get(need);
            PrimeResolver resolver(t);
            CountResult r = count_M2m(m, x, resolver);
            if (st.format.empty()) {
                out << to_string(r.value) << '\n';
            } else {
                Table tb({"m", "x", "count", "nodes_visited"});
                tb.add({integer(std::to_string(m)), integer(to_string(x)), integer(to_string(r.value)),
                        integer(std::to_string(r.nodes_visited))});
                tb.print(out, json);
            }
        } else if (*enumerate) {
            std::uint64_t x = parse_u64(x_text, "--x");
            if (x < 1) throw UsageError("--x must be at least 1");
            auto v = enumerate_Am(m, x, tables.get(x));
            Table tb({"n"});
            for (auto n : v) tb.add({integer(std::to_string(n))});
            tb.print(out, json);
        } else if (*asym) {
            double x = parse_real(x_text, "--x");
            ConstantBook book(tables.full());
            Table tb({"m", "x", "log_asym_eq6", "log_weak_eq3", "K_m", "C_2m"});
            auto r = json ? num_json : num;
            tb.add({integer(std::to_string(m)), r(x), r(theorem1_logM(book, m, x)), r(weak_logM(m, x)),
                    r(book.Km(m)), r(book.C2m(m))});
            tb.print(out, json);
        } else if (*constants) {
            ConstantBook book(tables.full());
            auto reports = constant_reports(book, m, st.tol);
            Table tb({"name", "value", "error_bound", "method", "tolerance_met"});
            auto r = st.format == "csv" ? num : num_json;
            for (const auto& c : reports)
                tb.add({text(c.name), r(c.value), r(c.error_bound), text(c.method), boolean(c.tolerance_met)});
            tb.print(out, st.format != "csv");
        } else if (*encode_cmd) {
            RootedTree tree;
            try {
                tree = parse_tree(matula_arg);
            } catch (const ParseError& e) {
                throw UsageError(std::string("tree: ") + e.what());
            }
            BigInt code = tables.with_growing([&](const PrimeTable& t) { return encode(tree, t); });
            if (json)
                out << "{\"tree\":" << json_string(matula_arg) << ",\"code\":" << code.str() << "}\n";
            else if (st.format == "csv")
                out << "tree,code\n" << matula_arg << ',' << code.str() << '\n';
            else
                out << code.str() << '\n';
        } else if (*decode_cmd) {
            BigInt n = parse_big(matula_arg, "n");
            if (n < 1) throw UsageError("n must be positive");
            std::string tree = tables.with_growing([&](const PrimeTable& t) { return format_tree(decode(n, t)); });
            if (json)
                out << "{\"code\":" << n.str() << ",\"tree\":" << json_string(tree) << "}\n";
            else if (st.format == "csv")
                out << "code,tree\n" << n.str() << ',' << tree << '\n';
            else
                out << tree << '\n';
        } else if (*v31) {
            std::vector<double> sigmas = list.empty() ? std::vector<double>{0.2, 0.1, 0.05, 0.02}
                                                      : parse_real_list(list, "--sigmas");
            std::optional<ConstantBook> book;
            std::optional<LambdaSystem> sys;
            double target;
            if (integers) {
                sys = LambdaSystem::integers();
                target = Dprime(integer_system_coeffs());
            } else {
                book.emplace(tables.full());
                sys = LambdaSystem::prime_powers(m, book->table());
                target = Dprime(lemma44_coeffs(m, *book));
            }
            Table tb({"sigma", "residual", "target", "gap", "error", "exact"});
            auto r = json ? num_json : num;
            for (double s : sigmas) {
                Residual res = lemma31_residual(*sys, s);
                tb.add({r(s), r(res.value), r(target), r(std::abs(res.value - target)), r(res.error),
                        boolean(res.exact)});
            }
            tb.print(out, json);
        } else if (*v44) {
            std::vector<double> us = list.empty() ? std::vector<double>{50, 100, 200, 350}
                                                  : parse_real_list(list, "--us");
            std::optional<ConstantBook> book;
            std::optional<LambdaSystem> sys;
            double target;
            if (integers) {
                sys = LambdaSystem::integers();
                target = integer_system_coeffs().D;
            } else {
                book.emplace(tables.full());
                sys = LambdaSystem::prime_powers(m, book->table());
                target = book->Dm(m);
            }
            Table tb({"u", "residual", "target", "gap", "error", "exact"});
            auto r = json ? num_json : num;
            for (double u : us) {
                Residual res = lemma44_residual(*sys, u);
                tb.add({r(u), r(res.value), r(target), r(std::abs(res.value - target)), r(res.error),
                        boolean(res.exact)});
            }
            tb.print(out, json);
        } else if (*vhr) {
            std::uint64_t u = parse_u64(x_text, "--u");
            if (u < 2) throw UsageError("--u must be at least 2");
            auto p = partition_numbers(u);
            BigInt sum = 0;
            for (const auto& v : p) sum += v;
            const double log_exact = log_big(sum);
            const double log_cor = corollary1_logP(integer_system_coeffs(), static_cast<double>(u));
            const double log_pu = log_big(p[u]);
            const double log_hr = hardy_ramanujan_logp(u);
            Table tb({"u", "partition_sum", "log_exact", "log_corollary", "ratio", "p_u", "log_p_u",
                      "log_hardy_ramanujan", "p_ratio"});
            auto r = json ? num_json : num;
            tb.add({integer(std::to_string(u)), integer(sum.str()), r(log_exact), r(log_cor),
                    r(std::exp(log_exact - log_cor)), integer(p[u].str()), r(log_pu), r(log_hr),
                    r(std::exp(log_pu - log_hr))});
            tb.print(out, json);
        } else if (*compare) {
            std::vector<u128> xs;
            for (const auto& s : list) {
                u128 x = parse_exact_integer(s, "--xs");
                if (x < 3) throw UsageError("--xs values must be at least 3");
                xs.push_back(x);
            }
            std::sort(xs.begin(), xs.end());
            xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
            ConstantBook book(tables.full());
            PrimeResolver resolver(book.table());
            Table tb({"x", "exact_count", "log_exact", "log_asym_eq6", "log_weak_eq3", "residual"});
            auto r = json ? num_json : num;
            for (u128 x : xs) {
                CountResult c = count_M2m(m, x, resolver);
                const double lx = std::log(static_cast<double>(x));
                const double le = c.value ? std::log(static_cast<double>(c.value)) : -HUGE_VAL;
                const double la = theorem1_logM_logx(book, m, lx);
                const double lw = std::numbers::pi * std::sqrt(2 * lx / (3 * std::log(static_cast<double>(m))));
                tb.add({integer(to_string(x)), integer(to_string(c.value)), r(le), r(la), r(lw),
                        r(std::abs(le - la))});
            }
            tb.print(out, json);
        } else if (*nth) {
            std::uint64_t i = parse_u64(prime_arg, "i");
            if (i < 1) throw UsageError("i must be positive");
            double est = i < 6 ? 13 : std::exp(log_prime_estimate(std::log(static_cast<double>(i)))) * 1.05 + 1000;
            std::uint64_t p;
            if (est <= static_cast<double>(st.sieve_limit)) {
                const PrimeTable& t = tables.get(static_cast<std::uint64_t>(est));
                p = i <= t.count() ? t.nth_prime(i) : PrimeResolver(tables.full()).nth_prime(i);
            } else {
                p = PrimeResolver(tables.full()).nth_prime(i);
            }
            if (json)
                out << "{\"i\":" << i << ",\"prime\":" << p << "}\n";
            else if (st.format == "csv")
                out << "i,prime\n" << i << ',' << p << '\n';
            else
                out << p << '\n';
        } else if (*pi) {
            std::uint64_t n = parse_u64(prime_arg, "n");
            std::uint64_t c = n <= st.sieve_limit ? tables.get(n).prime_pi(n) : legendre_prime_pi(n);
            if (json)
                out << "{\"n\":" << n << ",\"pi\":" << c << "}\n";
            else if (st.format == "csv")
                out << "n,pi\n" << n << ',' << c << '\n';
            else
                out << c << '\n';
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const CapacityError& e) {
        err << "capacity error: " << e.what() << '\n';
        return 1;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return 1;
    } catch (const RangeError& e) {
        err << "range error: " << e.what() << '\n';
        return 1;
    } catch (const ContractError& e) {
        err << "contract error: " << e.what() << '\n';
        return 1;
    } catch (const std::bad_alloc&) {
        err << "capacity error: out of memory\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace amc::cli

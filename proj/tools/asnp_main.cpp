#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "asnp/harness.hpp"
#include "asnp/intutil.hpp"
#include "asnp/polygon.hpp"
#include "asnp/rational.hpp"

using namespace asnp;

namespace {

struct CommonFlags {
    std::string out, csv, svg;
    unsigned threads = 0;
    bool no_cache = false;
};

void add_common(CLI::App* cmd, CommonFlags& cf) {
    cmd->add_option("--out", cf.out, "append JSON-lines records to this file instead of stdout");
    cmd->add_option("--csv", cf.csv, "also write the run's last polygon as CSV to this file");
    cmd->add_option("--svg", cf.svg, "also write the run's last polygon as SVG to this file");
    cmd->add_option("--threads", cf.threads, "worker threads, 0 means machine parallelism");
    cmd->add_flag("--no-cache", cf.no_cache, "recompute even when a cached result exists");
}

RunOptions to_options(const CommonFlags& cf) {
    RunOptions opt;
    opt.threads = cf.threads;
    opt.use_cache = !cf.no_cache;
    return opt;
}

// last polygon-shaped object in the result stream, for --csv/--svg
std::optional<NewtonPolygon> last_polygon(const RunOutcome& out) {
    std::optional<NewtonPolygon> found;
    for (const auto& rec : out.records)
        for (const auto& [key, value] : rec.result.items()) {
            (void)key;
            if (value.is_object() && value.contains("vertices"))
                found = polygon_from_json(value);
        }
    return found;
}

int emit(const RunOutcome& out, const CommonFlags& cf) {
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!cf.out.empty()) {
        file.open(cf.out, std::ios::app);
        if (!file) {
            std::cerr << "asnp: cannot open " << cf.out << " for writing\n";
            return 1;
        }
        os = &file;
    }
    const std::string ts = current_timestamp();
    for (const auto& rec : out.records) *os << record_line(rec, ts) << '\n';
    if (!cf.csv.empty() || !cf.svg.empty()) {
        std::optional<NewtonPolygon> np = last_polygon(out);
        if (!np) {
            std::cerr << "asnp: this run produced no polygon to plot\n";
            return 1;
        }
        if (!cf.csv.empty()) std::ofstream(cf.csv, std::ios::trunc) << emit_csv(*np);
        if (!cf.svg.empty()) std::ofstream(cf.svg, std::ios::trunc) << emit_svg(*np);
    }
    return out.verified ? 0 : 2;
}

std::vector<std::uint32_t> primes_for(std::uint32_t d, std::uint32_t p_single,
                                      const std::string& range) {
    std::vector<std::uint32_t> primes;
    if (range.empty()) {
        primes.push_back(p_single);
        return primes;
    }
    auto colon = range.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("--p-range expects the form LOW:HIGH");
    std::uint32_t lo = std::uint32_t(std::stoul(range.substr(0, colon)));
    std::uint32_t hi = std::uint32_t(std::stoul(range.substr(colon + 1)));
    for (std::uint32_t p = lo; p <= hi; ++p)
        if (is_prime64(p) && d % p != 0) primes.push_back(p);
    return primes;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Newton polygons for one-variable exponential sums and their curves"};
    app.require_subcommand(1);

    // shared parameter slots; each subcommand binds the ones it uses
    std::uint32_t d = 0, p = 0, b = 0, ell = 1, t = 3, count = 100;
    std::uint64_t alpha = 0, seed = 1;
    std::string f_str, p_range, family = "full", method = "both", theorem, check, a_str = "1";
    bool alpha_scan_flag = false;
    CommonFlags cf;

    CLI::App* c_gnp = app.add_subcommand("gnp", "generic Newton polygons for a degree");
    c_gnp->add_option("--d", d, "polynomial degree")->required();
    c_gnp->add_option("--p", p, "prime");
    c_gnp->add_option("--p-range", p_range, "prime sweep LOW:HIGH, primes prime to d");
    c_gnp->add_option("--family", family, "full or one-param");
    add_common(c_gnp, cf);

    CLI::App* c_verify = app.add_subcommand("verify", "check a polygon statement end to end");
    c_verify->add_option("--theorem", theorem, "sameNP, main, one-param, or counterexample2")
        ->required();
    c_verify->add_option("--d", d, "polynomial degree");
    c_verify->add_option("--p", p, "prime");
    c_verify->add_option("--b", b, "field degree over the prime field");
    c_verify->add_option("--ell", ell, "rank of the covering");
    c_verify->add_option("--f", f_str, "coefficients a_1,...,a_d, rationals allowed");
    c_verify->add_option("--a", a_str, "linear coefficient for the one-param family");
    add_common(c_verify, cf);

    CLI::App* c_mem = app.add_subcommand("membership", "generic-locus membership and height");
    c_mem->add_option("--d", d, "polynomial degree")->required();
    c_mem->add_option("--f", f_str, "coefficients a_1,...,a_d")->required();
    add_common(c_mem, cf);

    CLI::App* c_lfun = app.add_subcommand("lfun", "L-polynomial Newton polygons");
    c_lfun->add_option("--d", d, "polynomial degree")->required();
    c_lfun->add_option("--p", p, "prime")->required();
    c_lfun->add_option("--b", b, "field degree, default 1");
    c_lfun->add_option("--f", f_str, "coefficients a_1,...,a_d")->required();
    c_lfun->add_option("--alpha", alpha, "twist by the element at this index");
    c_lfun->add_flag("--alpha-scan", alpha_scan_flag, "scan every nonzero twist");
    add_common(c_lfun, cf);

    CLI::App* c_zeta = app.add_subcommand("zeta", "curve zeta numerator slopes");
    c_zeta->add_option("--p", p, "prime")->required();
    c_zeta->add_option("--ell", ell, "rank of the covering")->required();
    c_zeta->add_option("--b", b, "field degree, default ell");
    c_zeta->add_option("--d", d, "polynomial degree, checked against --f");
    c_zeta->add_option("--f", f_str, "coefficients a_1,...,a_d")->required();
    c_zeta->add_option("--method", method, "direct, product, or both");
    add_common(c_zeta, cf);

    CLI::App* c_dwork = app.add_subcommand("dwork", "matrix-side consistency checks");
    c_dwork->add_option("--check", check, "key2, leading, or transform")->required();
    c_dwork->add_option("--d", d, "polynomial degree");
    c_dwork->add_option("--p", p, "prime")->required();
    c_dwork->add_option("--t", t, "truncation size for transform");
    c_dwork->add_option("--count", count, "instances for transform");
    c_dwork->add_option("--seed", seed, "base seed for transform");
    add_common(c_dwork, cf);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        RunOptions opt = to_options(cf);
        RunOutcome out;
        if (c_gnp->parsed()) {
            if (p == 0 && p_range.empty())
                throw std::invalid_argument("gnp needs --p or --p-range");
            out = run_gnp(d, primes_for(d, p, p_range), family, opt);
        } else if (c_verify->parsed()) {
            if (theorem == "sameNP") {
                if (b == 0) b = 1;
                out = run_verify_samenp(d, p, b, parse_coeff_list(f_str), opt);
            } else if (theorem == "main") {
                if (b == 0) b = ell;
                out = run_verify_main(p, ell, b, parse_coeff_list(f_str), opt);
            } else if (theorem == "one-param") {
                out = run_verify_one_param(d, rat_parse(a_str), p, opt);
            } else if (theorem == "counterexample2") {
                out = run_verify_counterexample2(opt);
            } else {
                throw std::invalid_argument("unknown theorem '" + theorem + "'");
            }
        } else if (c_mem->parsed()) {
            out = run_membership(d, parse_coeff_list(f_str), opt);
        } else if (c_lfun->parsed()) {
            if (b == 0) b = 1;
            std::optional<std::uint64_t> idx;
            if (!alpha_scan_flag) idx = alpha;
            if (!alpha_scan_flag && alpha == 0)
                throw std::invalid_argument("lfun needs --alpha INDEX or --alpha-scan");
            out = run_lfun(d, p, b, parse_coeff_list(f_str), idx, alpha_scan_flag, opt);
        } else if (c_zeta->parsed()) {
            if (b == 0) b = ell;
            std::vector<mpq_class> f = parse_coeff_list(f_str);
            if (d != 0 && d != std::uint32_t(f.size()))
                throw std::invalid_argument("--d disagrees with the length of --f");
            out = run_zeta(p, ell, b, f, method, opt);
        } else if (c_dwork->parsed()) {
            if (check == "key2") {
                out = run_dwork_key2(d, p, opt);
            } else if (check == "leading") {
                out = run_dwork_leading(d, p, opt);
            } else if (check == "transform") {
                out = run_dwork_transform(p, t, count, seed, opt);
            } else {
                throw std::invalid_argument("unknown check '" + check + "'");
            }
        }
        return emit(out, cf);
    } catch (const FeasibilityError& e) {
        std::cerr << nlohmann::json{{"kind", "diagnostic"},
                                    {"error", "infeasible"},
                                    {"estimate", e.estimate},
                                    {"message", e.what()}}
                         .dump()
                  << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << nlohmann::json{{"kind", "diagnostic"}, {"error", "usage"}, {"message", e.what()}}
                         .dump()
                  << '\n';
        return 1;
    }
}

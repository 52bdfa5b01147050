#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "asnp/polygon.hpp"

namespace asnp {

inline constexpr const char* kArtifactVersion = "0.1.0";

// One experiment = one JSON line: {kind, params, result, version, timestamp,
// cached}.  Everything except the timestamp is a pure function of (kind,
// params), so reruns are byte-identical modulo that field.
struct ExperimentRecord {
    std::string kind;
    nlohmann::json params;
    nlohmann::json result;
    bool cached = false;
};

// {"vertices":[[x,"num/den"],...],"slopes":[["num/den",mult],...]}; rationals
// rendered as strings, abscissas and multiplicities as integers
nlohmann::json polygon_json(const NewtonPolygon&);
nlohmann::json slopes_json(const SlopeMultiset&);
NewtonPolygon polygon_from_json(const nlohmann::json&);  // inverse of polygon_json

std::string record_line(const ExperimentRecord&, const std::string& timestamp);
std::string current_timestamp();  // UTC, seconds resolution

// FNV-1a over kind and the canonical (key-sorted) parameter dump
std::uint64_t canonical_key(const std::string& kind, const nlohmann::json& params);

// one JSON file per key under a directory; collisions detected by storing the
// keyed identity alongside the payload
class ResultCache {
public:
    ResultCache(std::string dir, bool enabled);

    std::optional<nlohmann::json> lookup(const std::string& kind, const nlohmann::json& params) const;
    void store(const std::string& kind, const nlohmann::json& params,
               const nlohmann::json& result) const;
    bool enabled() const { return enabled_; }

private:
    std::string dir_;
    bool enabled_;
};

// enumeration budget refusal, with the estimate in the message
struct FeasibilityError : std::runtime_error {
    std::uint64_t estimate;
    explicit FeasibilityError(std::uint64_t est);
};

struct RunOptions {
    unsigned threads = 0;   // 0 = machine parallelism
    bool use_cache = true;
    std::string cache_dir;  // empty = .asnp-cache
};

struct RunOutcome {
    std::vector<ExperimentRecord> records;
    bool verified = true;  // false = a verify-style claim failed (exit 2)
};

// polygons and epsilon tables for one prime or a sweep; a sweep appends a
// summary record checking generic = Hodge exactly at p = 1 mod d
RunOutcome run_gnp(std::uint32_t d, const std::vector<std::uint32_t>& primes,
                   const std::string& family, const RunOptions& = {});

// alpha-scan over the full multiplicative group, each polygon against the
// generic one
RunOutcome run_verify_samenp(std::uint32_t d, std::uint32_t p, std::uint32_t b,
                             const std::vector<mpq_class>& f, const RunOptions& = {});

// curve slopes as stacked copies of the generic polygon
RunOutcome run_verify_main(std::uint32_t p, std::uint32_t ell, std::uint32_t b,
                           const std::vector<mpq_class>& f, const RunOptions& = {});

// x^d + a x against the one-parameter generic polygon; needs p beyond
// (d-1)^3 + 1 and beyond every prime in the denominator of a
RunOutcome run_verify_one_param(std::uint32_t d, const mpq_class& a, std::uint32_t p,
                                const RunOptions& = {});

// the fixed characteristic-2 instance where scaling moves the polygon
RunOutcome run_verify_counterexample2(const RunOptions& = {});

RunOutcome run_membership(std::uint32_t d, const std::vector<mpq_class>& f, const RunOptions& = {});

// single alpha (by subfield index) or full scan; emits polygon + structure
RunOutcome run_lfun(std::uint32_t d, std::uint32_t p, std::uint32_t b,
                    const std::vector<mpq_class>& f, std::optional<std::uint64_t> alpha_index,
                    bool scan, const RunOptions& = {});

// direct numerator slopes, the alpha-product, or both with the comparison
RunOutcome run_zeta(std::uint32_t p, std::uint32_t ell, std::uint32_t b,
                    const std::vector<mpq_class>& f, const std::string& method,
                    const RunOptions& = {});

// key2: the entrywise congruence at (d, p); leading: series coefficients
// against the multinomial model; transform: generated slope-transfer checks
RunOutcome run_dwork_key2(std::uint32_t d, std::uint32_t p, const RunOptions& = {});
RunOutcome run_dwork_leading(std::uint32_t d, std::uint32_t p, const RunOptions& = {});
RunOutcome run_dwork_transform(std::uint32_t p, std::uint32_t t, std::uint32_t count,
                               std::uint64_t seed, const RunOptions& = {});

// "a1,a2,...,ad" with entries "num" or "num/den"
std::vector<mpq_class> parse_coeff_list(const std::string&);

// Sigma over m <= d-1 of q^m plus the degree-check extension, times the scan
// width; throws FeasibilityError beyond the enumeration cap
std::uint64_t lfun_cost_estimate(std::uint32_t d, std::uint32_t p, std::uint32_t b,
                                 std::uint64_t alphas);

}  // namespace asnp

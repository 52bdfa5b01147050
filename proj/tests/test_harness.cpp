#include <doctest.h>

#include <unistd.h>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "asnp/fields.hpp"
#include "asnp/gnp.hpp"
#include "asnp/harness.hpp"
#include "asnp/polygon.hpp"

using namespace asnp;
using nlohmann::json;

namespace {

// fresh per-process scratch directory; removed up front so reruns start cold
std::string scratch_dir(const char* tag) {
    namespace fs = std::filesystem;
    fs::path p = fs::temp_directory_path() /
                 ("asnp-test-" + std::string(tag) + "-" + std::to_string(::getpid()));
    fs::remove_all(p);
    return p.string();
}

RunOptions cache_opts(const std::string& dir) {
    RunOptions opt;
    opt.cache_dir = dir;
    return opt;
}

RunOptions no_cache() {
    RunOptions opt;
    opt.use_cache = false;
    return opt;
}

std::vector<mpq_class> ints(const std::vector<long>& a) {
    std::vector<mpq_class> v;
    for (long x : a) v.emplace_back(x);
    return v;
}

}  // namespace

TEST_CASE("polygon json round trip") {
    NewtonPolygon hull = hull_from_values({{0, ExtRational(0, 1)},
                                           {1, ExtRational(1, 3)},
                                           {2, ExtRational(1, 1)}});
    json j = polygon_json(hull);
    CHECK(j["vertices"] == json::parse(R"([[0,"0"],[1,"1/3"],[2,"1"]])"));
    CHECK(j["slopes"] == json::parse(R"([["1/3",1],["2/3",1]])"));
    CHECK(polygon_from_json(j) == hull);

    // degenerate hull: interior lattice point is not a vertex
    NewtonPolygon line = gnp_full(3, 5).polygon;
    json jl = polygon_json(line);
    CHECK(jl["vertices"] == json::parse(R"([[0,"0"],[2,"1"]])"));
    CHECK(polygon_from_json(jl) == line);

    SlopeMultiset ms = SlopeMultiset::from_pairs({{mpq_class(1, 2), 4}, {mpq_class(3, 4), 1}});
    CHECK(slopes_json(ms) == json::parse(R"([["1/2",4],["3/4",1]])"));
}

TEST_CASE("record lines are canonical") {
    ExperimentRecord rec;
    rec.kind = "gnp";
    rec.params = json{{"p", 5}, {"d", 3}};  // insertion order must not leak into the line
    rec.result = json{{"ok", true}};
    std::string line = record_line(rec, "2026-01-01T00:00:00Z");
    CHECK(line ==
          R"({"cached":false,"kind":"gnp","params":{"d":3,"p":5},"result":{"ok":true},)"
          R"("timestamp":"2026-01-01T00:00:00Z","version":"0.1.0"})");

    std::string ts = current_timestamp();
    REQUIRE(ts.size() == 20);
    CHECK(ts[4] == '-');
    CHECK(ts[10] == 'T');
    CHECK(ts[19] == 'Z');
}

TEST_CASE("canonical keys separate experiments") {
    json a{{"d", 3}, {"p", 5}};
    json b{{"p", 5}, {"d", 3}};
    CHECK(canonical_key("gnp", a) == canonical_key("gnp", b));
    CHECK(canonical_key("gnp", a) != canonical_key("zeta", a));
    json c{{"d", 3}, {"p", 7}};
    CHECK(canonical_key("gnp", a) != canonical_key("gnp", c));
}

TEST_CASE("result cache round trip") {
    const std::string dir = scratch_dir("cache");
    ResultCache cache(dir, true);
    json params{{"d", 3}, {"p", 5}};
    json result{{"slopes", json::array({json::array({"1/2", 2})})}};

    CHECK(!cache.lookup("gnp", params).has_value());
    cache.store("gnp", params, result);
    auto hit = cache.lookup("gnp", params);
    REQUIRE(hit.has_value());
    CHECK(*hit == result);
    CHECK(!cache.lookup("zeta", params).has_value());

    SUBCASE("corrupt payloads are misses") {
        char name[24];
        std::snprintf(name, sizeof name, "%016llx",
                      static_cast<unsigned long long>(canonical_key("gnp", params)));
        std::ofstream(dir + "/" + name + ".json") << "not json";
        CHECK(!cache.lookup("gnp", params).has_value());
    }

    SUBCASE("disabled cache neither reads nor writes") {
        ResultCache off(dir + "-off", false);
        off.store("gnp", params, result);
        CHECK(!off.lookup("gnp", params).has_value());
        CHECK(!std::filesystem::exists(dir + "-off"));
    }
}

TEST_CASE("membership runs report known instances") {
    RunOutcome skew = run_membership(3, ints({1, 0, 1}), no_cache());
    CHECK(skew.verified);
    REQUIRE(skew.records.size() == 1);
    const json& r0 = skew.records[0].result;
    CHECK(r0["in_U"] == false);
    CHECK(r0["failing_factor"] == "H(r=1,i=1,j=2)");
    CHECK(!r0.contains("height"));

    RunOutcome full = run_membership(3, ints({1, 1, 1}), no_cache());
    const json& r1 = full.records[0].result;
    CHECK(r1["in_U"] == true);
    CHECK(r1["height"]["floor"] == 20);
    CHECK(r1["height"]["bad_primes"] == json::array({"2"}));
    CHECK(r1["height"]["bound"] == "20");
    CHECK(r1["height"]["complete"] == true);
}

TEST_CASE("cached reruns replay stored results") {
    RunOptions opt = cache_opts(scratch_dir("replay"));
    RunOutcome cold = run_membership(3, ints({1, 1, 1}), opt);
    RunOutcome warm = run_membership(3, ints({1, 1, 1}), opt);
    CHECK(!cold.records[0].cached);
    CHECK(warm.records[0].cached);
    CHECK(cold.records[0].result == warm.records[0].result);
    CHECK(cold.records[0].params == warm.records[0].params);
}

TEST_CASE("verification runs return the right verdicts") {
    RunOutcome same = run_verify_samenp(3, 11, 1, ints({1, 0, 1}), no_cache());
    CHECK(same.verified);
    CHECK(same.records[0].result["all_equal"] == true);
    CHECK(same.records[0].result["gnp"]["slopes"] == json::parse(R"([["2/5",1],["3/5",1]])"));

    RunOutcome zeta = run_zeta(2, 1, 1, ints({1, 0, 1}), "both", no_cache());
    CHECK(zeta.verified);
    CHECK(zeta.records[0].result["equal"] == true);
    CHECK(zeta.records[0].result["direct_slopes"] == zeta.records[0].result["product_slopes"]);

    RunOutcome one = run_verify_one_param(3, mpq_class(1), 11, no_cache());
    CHECK(one.verified);
    CHECK(one.records[0].result["all_equal"] == true);

    RunOutcome tr = run_dwork_transform(5, 3, 3, 11, no_cache());
    CHECK(tr.verified);
    CHECK(tr.records[0].result["all_equal"] == true);
    CHECK(tr.records[0].result["count"] == 3);
}

TEST_CASE("gnp sweep summarizes the split-prime law") {
    RunOutcome sweep = run_gnp(3, {5, 7, 11, 13}, "full", no_cache());
    CHECK(sweep.verified);
    REQUIRE(sweep.records.size() == 5);
    const ExperimentRecord& last = sweep.records.back();
    CHECK(last.kind == "gnp-sweep");
    CHECK(last.result["hodge_iff_split"] == true);
    for (std::size_t i = 0; i + 1 < sweep.records.size(); ++i) {
        std::uint32_t p = sweep.records[i].params["p"].get<std::uint32_t>();
        CHECK(sweep.records[i].result["hodge_equal"] == (p % 3 == 1));
    }
}

TEST_CASE("thread count does not change results") {
    RunOptions one = no_cache();
    one.threads = 1;
    RunOptions three = no_cache();
    three.threads = 3;
    RunOutcome a = run_verify_samenp(3, 7, 1, ints({1, 0, 1}), one);
    RunOutcome b = run_verify_samenp(3, 7, 1, ints({1, 0, 1}), three);
    CHECK(a.records[0].result == b.records[0].result);
    CHECK(a.verified);
    CHECK(b.verified);
}

TEST_CASE("coefficient lists parse as rationals") {
    std::vector<mpq_class> v = parse_coeff_list("1,0,1/2");
    REQUIRE(v.size() == 3);
    CHECK(v[0] == 1);
    CHECK(v[1] == 0);
    CHECK(v[2] == mpq_class(1, 2));
    CHECK_THROWS_AS(parse_coeff_list(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_coeff_list("1,x,2"), std::invalid_argument);
}

TEST_CASE("infeasible enumerations are refused") {
    // d=3, q=4: q^1 + q^2 per alpha
    CHECK(lfun_cost_estimate(3, 2, 2, 1) == 20);
    CHECK(lfun_cost_estimate(3, 2, 2, 7) == 140);
    try {
        lfun_cost_estimate(30, 101, 3, 1000);
        FAIL("expected a feasibility refusal");
    } catch (const FeasibilityError& e) {
        CHECK(e.estimate > kEnumerationCap);
        CHECK(std::string(e.what()).find("enumeration") != std::string::npos);
    }
    CHECK_THROWS_AS(run_verify_samenp(12, 499, 3, ints({1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1}), no_cache()),
                    FeasibilityError);
}

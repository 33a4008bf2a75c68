#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "ceildyn/chain.hpp"
#include "ceildyn/harness.hpp"
#include "ceildyn/squaring.hpp"

using namespace ceildyn;
namespace fs = std::filesystem;

namespace {

std::vector<std::pair<BigInt, BigInt>> seq(std::initializer_list<std::pair<long, long>> xs) {
    std::vector<std::pair<BigInt, BigInt>> out;
    for (auto [a, b] : xs) out.emplace_back(BigInt(a), BigInt(b));
    return out;
}

fs::path fresh_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("ceildyn_test_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("b-file export") {
    std::vector<std::pair<BigInt, BigInt>> s;
    for (long l = 1; l <= 4; ++l) {
        s.emplace_back(BigInt(l), BigInt(static_cast<unsigned long>(theta_denominator2(BigInt(l)).steps)));
    }
    CHECK(export_bfile(s) == "1 1\n2 2\n3 1\n4 3\n");

    s.clear();
    for (std::uint64_t l = 3; l <= 11; ++l) s.emplace_back(BigInt(static_cast<unsigned long>(l)), BigInt(static_cast<unsigned long>(*theta_of(l, 3, 25))));
    CHECK(export_bfile(s) == "3 0\n4 2\n5 6\n6 0\n7 1\n8 1\n9 0\n10 5\n11 2\n");

    CHECK(export_bfile({}).empty());
    CHECK_THROWS_AS(export_bfile(seq({{2, 1}, {2, 3}})), std::invalid_argument);
    CHECK_THROWS_AS(export_bfile(seq({{3, 1}, {2, 3}})), std::invalid_argument);
    CHECK_THROWS_AS(export_bfile({{BigInt(1), pow_ui(10, 1000)}}), std::invalid_argument);
    CHECK_NOTHROW(export_bfile({{BigInt(1), pow_ui(10, 1000) - 1}}));
}

TEST_CASE("row formats") {
    Row a;
    a.input = "5/2";
    a.index = BigInt(2);
    a.theta = 2;
    a.reached = "60";
    Row b;
    b.input = "6/5";
    b.index = BigInt(3);
    b.unresolved = true;

    CHECK(format_rows({a}, OutputFormat::table) == "theta=2 reached=60\n");
    CHECK(format_rows({a, b}, OutputFormat::table) == "5/2 theta=2 reached=60\n6/5 theta=unresolved\n");
    CHECK(format_rows({a, b}, OutputFormat::csv) == "input,theta,reached,digits,unresolved\n5/2,2,60,,false\n6/5,,,,true\n");
    auto j = nlohmann::json::parse(format_rows({a, b}, OutputFormat::json));
    REQUIRE(j.size() == 2);
    CHECK(j[0]["input"] == "5/2");
    CHECK(j[0]["theta"] == 2);
    CHECK(j[0]["reached"] == "60");
    CHECK(j[0]["unresolved"] == false);
    CHECK(j[1]["theta"].is_null());
    CHECK(j[1]["unresolved"] == true);
    CHECK_FALSE(j[1].contains("reached"));
    CHECK(format_rows({a}, OutputFormat::bfile) == "2 2\n");
    CHECK_THROWS_AS(format_rows({b}, OutputFormat::bfile), std::invalid_argument);
    CHECK_THROWS_AS(parse_format("xml"), std::invalid_argument);
    for (auto f : {OutputFormat::json, OutputFormat::csv, OutputFormat::bfile, OutputFormat::table}) CHECK(parse_format(format_name(f)) == f);
}

TEST_CASE("records") {
    RecordList r = records(RecordKind::theta_d3, 100, 25, 1);
    REQUIRE(r.entries.size() == 4);
    CHECK(r.entries[0] == std::pair<BigInt, std::uint64_t>{BigInt(3), 0});
    CHECK(r.entries[1] == std::pair<BigInt, std::uint64_t>{BigInt(4), 2});
    CHECK(r.entries[2] == std::pair<BigInt, std::uint64_t>{BigInt(5), 6});
    CHECK(r.entries[3] == std::pair<BigInt, std::uint64_t>{BigInt(28), 22});
    CHECK(r.unresolved == std::vector<BigInt>{BigInt(1), BigInt(2)});
    CHECK(r.scanned == 100);

    RecordList m = records(RecordKind::theta_mult, 200, 25, 3);
    std::vector<std::pair<long, std::uint64_t>> want{{0, 1}, {1, 3}, {5, 9}, {161, 15}};
    REQUIRE(m.entries.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
        CHECK(m.entries[i].first == want[i].first);
        CHECK(m.entries[i].second == want[i].second);
    }

    RecordList s = records(RecordKind::theta_succ, 20, 8, 2);
    std::vector<std::pair<long, std::uint64_t>> want_s{{1, 0}, {2, 1}, {3, 2}, {4, 3}, {5, 18}, {11, 26}, {19, 56}};
    REQUIRE(s.entries.size() == want_s.size());
    for (std::size_t i = 0; i < want_s.size(); ++i) {
        CHECK(s.entries[i].first == want_s[i].first);
        CHECK(s.entries[i].second == want_s[i].second);
    }
    CHECK(s.unresolved.empty());
    CHECK_THROWS_AS(parse_record_kind("nope"), std::invalid_argument);
}

TEST_CASE("records are independent of worker count") {
    RecordList a = records(RecordKind::theta_d3, 400, 25, 1);
    RecordList b = records(RecordKind::theta_d3, 400, 25, 4);
    CHECK(a.entries == b.entries);
    CHECK(a.unresolved == b.unresolved);
}

TEST_CASE("config canonical form and cache key") {
    ExperimentConfig a;
    a.command = "theta";
    a.num = "5";
    a.den = "2";
    ExperimentConfig b = a;
    b.workers = 8;
    b.cache_dir = "/elsewhere";
    CHECK(a.canonical() == b.canonical());
    CHECK(cache_key(a) == cache_key(b));
    CHECK(cache_key(a).size() == 64);
    ExperimentConfig c = a;
    c.window = 25;
    CHECK(cache_key(a) != cache_key(c));
    c = a;
    c.format = OutputFormat::json;
    CHECK(cache_key(a) != cache_key(c));
    c = a;
    c.num = "7";
    CHECK(cache_key(a) != cache_key(c));

    ExperimentConfig bad = a;
    bad.den = "0";
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = a;
    bad.workers = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("cache round trip") {
    const fs::path dir = fresh_dir("cache");
    ExperimentConfig cfg;
    cfg.command = "theta";
    cfg.num = "5";
    cfg.den = "2";
    cfg.cache_dir = dir.string();
    int calls = 0;
    auto compute = [&] {
        ++calls;
        return std::string("theta=2 reached=60\n");
    };
    bool hit = true;
    const std::string first = cached_run(cfg, compute, &hit);
    CHECK_FALSE(hit);
    CHECK(calls == 1);
    CHECK(fs::exists(dir / (cache_key(cfg) + ".json")));
    const std::string second = cached_run(cfg, compute, &hit);
    CHECK(hit);
    CHECK(calls == 1);
    CHECK(first == second);

    // No stray temporary files remain.
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(dir)) {
        (void)e;
        ++files;
    }
    CHECK(files == 1);

    // A corrupt entry is recomputed and replaced.
    {
        std::ofstream o(dir / (cache_key(cfg) + ".json"), std::ios::trunc);
        o << "{ not json";
    }
    CHECK(cached_run(cfg, compute, &hit) == first);
    CHECK_FALSE(hit);
    CHECK(calls == 2);

    ExperimentConfig none = cfg;
    none.cache_dir.clear();
    cached_run(none, compute, &hit);
    CHECK_FALSE(hit);
    CHECK(calls == 3);
    fs::remove_all(dir);
}

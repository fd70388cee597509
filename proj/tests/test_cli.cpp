#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "json.hpp"

using nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    RunResult r;
    std::string cmd = std::string(GRUSIN_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf;
    while (std::size_t got = std::fread(buf.data(), 1, buf.size(), pipe))
        r.out.append(buf.data(), got);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

json load_schema(const std::string& name) {
    std::ifstream in(std::string(GRUSIN_SCHEMA_DIR) + "/" + name);
    REQUIRE(in.good());
    return json::parse(in);
}

// Light structural validator: required keys present, primitive types match.
void check_against_schema(const json& value, const json& schema) {
    std::string type = schema.value("type", "");
    if (type == "object") {
        REQUIRE(value.is_object());
        if (schema.contains("required"))
            for (const auto& key : schema["required"])
                CHECK_MESSAGE(value.contains(key.get<std::string>()),
                              ("missing key " + key.get<std::string>()));
        if (schema.contains("properties"))
            for (auto& [key, sub] : schema["properties"].items())
                if (value.contains(key)) check_against_schema(value[key], sub);
    } else if (type == "array") {
        REQUIRE(value.is_array());
        if (schema.contains("items"))
            for (const auto& item : value)
                check_against_schema(item, schema["items"]);
    } else if (type == "number") {
        CHECK(value.is_number());
    } else if (type == "integer") {
        CHECK(value.is_number_integer());
    } else if (type == "string") {
        CHECK(value.is_string());
    } else if (type == "boolean") {
        CHECK(value.is_boolean());
    }
}

}  // namespace

TEST_CASE("distance command: values, schema, exit codes") {
    RunResult r = run_cli("distance --n 1 --p1 0,0 --p2 0,1");
    CHECK(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["d"].get<double>() == doctest::Approx(2.5066283).epsilon(1e-7));
    check_against_schema(j, load_schema("distance_result.schema.json"));

    r = run_cli("distance --n 1 --p1 1,0 --p2 -1,5");
    j = json::parse(r.out);
    CHECK(j["d"].get<double>() == doctest::Approx(5.60499).epsilon(1e-5));
    CHECK(j["case"] == "antipodal-x-large-u");

    r = run_cli("distance --n 2 --p1 1,0,0 --p2 1,0,0");
    j = json::parse(r.out);
    CHECK(j["d"].get<double>() == 0.0);

    CHECK(run_cli("distance --p1 1,0 --p2 oops,1").exit_code == 2);
    CHECK(run_cli("distance --p1 1,0").exit_code == 2);
    CHECK(run_cli("distance --n 2 --p1 1,0 --p2 0,1").exit_code == 2);
}

TEST_CASE("geodesics command: known rows and sample endpoints") {
    RunResult r = run_cli("geodesics --p1 1,0 --p2 1,6 --b-max 7 --samples 9");
    CHECK(r.exit_code == 0);
    json rows = json::parse(r.out);
    check_against_schema(rows, load_schema("geodesic_table.schema.json"));
    REQUIRE(rows.size() == 3);
    // sorted by length; b values match the reference table
    CHECK(rows[0]["b"].get<double>() == doctest::Approx(2.1014).epsilon(2e-3));
    CHECK(rows[0]["length"].get<double>() <= rows[1]["length"].get<double>());
    for (const auto& row : rows) {
        const auto& first = row["samples"].front();
        const auto& last = row["samples"].back();
        CHECK(first[0].get<double>() == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(first[1].get<double>() == doctest::Approx(0.0).epsilon(1e-8));
        CHECK(last[0].get<double>() == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(last[1].get<double>() == doctest::Approx(6.0).epsilon(1e-8));
    }

    // u = 0 generic pair: single straight row
    r = run_cli("geodesics --p1 1,0 --p2 2.5,0 --b-max 20");
    rows = json::parse(r.out);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0]["b"].get<double>() == 0.0);
}

TEST_CASE("kernel command: values, slice, shift flag, schema") {
    RunResult r = run_cli("kernel --t 0.5 --x 0 --xi 0 --u 0 --n 1");
    CHECK(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["value"].get<double>() > 0.0);
    check_against_schema(j, load_schema("kernel_value.schema.json"));

    // lambda = 0 slice is the Euclidean kernel
    r = run_cli("kernel --t 0.5 --x 0.3 --xi -0.1 --slice-lambda 0");
    j = json::parse(r.out);
    double want = std::pow(4.0 * M_PI * 0.5, -0.5) * std::exp(-0.16 / 2.0);
    CHECK(j["value"].get<double>() == doctest::Approx(want).epsilon(1e-12));

    RunResult with = run_cli("kernel --t 0.25 --x 0.4 --xi 0.2 --u 0.7 --shift auto");
    RunResult without = run_cli("kernel --t 0.25 --x 0.4 --xi 0.2 --u 0.7 --shift none");
    double kv = json::parse(with.out)["value"].get<double>();
    double kv0 = json::parse(without.out)["value"].get<double>();
    CHECK(std::abs(kv - kv0) <= 10.0 * 1e-8 * std::abs(kv0));
}

TEST_CASE("tabulate command emits poles as nan") {
    RunResult r = run_cli(
        "tabulate --function mu --a 0.5 --b-from 0 --b-to 6.2831853071795862 "
        "--count 5 --format csv");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("nan") != std::string::npos);  // pi and 2pi rows
    CHECK(r.out.rfind("b,value", 0) == 0);
}

TEST_CASE("bound-check emits a valid BoundReport") {
    RunResult r = run_cli("bound-check --n 1 --grid small");
    CHECK(r.exit_code == 0);
    json j = json::parse(r.out);
    check_against_schema(j, load_schema("bound_report.schema.json"));
    CHECK(j["violations_of_decay"].get<int>() == 0);
}

TEST_CASE("verify: exit code contract and schema") {
    RunResult r = run_cli("verify functions");
    CHECK(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["passed"].get<bool>());
    check_against_schema(j, load_schema("verify_report.schema.json"));
    CHECK(run_cli("verify nonsense").exit_code == 2);
}

TEST_CASE("determinism: identical flags and seed give identical bytes") {
    RunResult a = run_cli("distance --p1 0.3,0.2,1.7 --p2 -1,0.4,0.9");
    RunResult b = run_cli("distance --p1 0.3,0.2,1.7 --p2 -1,0.4,0.9");
    CHECK(a.out == b.out);

    RunResult c = run_cli("verify oracle --seed 42");
    RunResult d = run_cli("verify oracle --seed 42");
    CHECK(c.exit_code == 0);
    CHECK(c.out == d.out);
}

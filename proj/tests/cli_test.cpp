/*
 * Copyright 2026 The mocop Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "mocop/pairing.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kData = MOCOP_TEST_DATA;

struct Run {
    int status = 0;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int status = mocop::cli::run(args, out, err);
    return {status, out.str(), err.str()};
}

std::string slurp(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

struct TempDir {
    fs::path path;
    TempDir()
    {
        path = fs::temp_directory_path() / ("mocop_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

} // namespace

TEST_CASE("cli: pair writes a deterministic paired sample with metadata")
{
    TempDir dir;
    const auto first = run({"pair", "--x", kData + "/banks_it.csv", "--y", kData + "/banks_uk.csv", "-o", dir / "a.csv"});
    REQUIRE(first.status == 0);
    const auto second = run({"pair", "--x", kData + "/banks_it.csv", "--y", kData + "/banks_uk.csv", "-o", dir / "b.csv"});
    REQUIRE(second.status == 0);
    const auto text = slurp(dir / "a.csv");
    CHECK(text == slurp(dir / "b.csv"));

    std::istringstream in(text);
    const auto rows = mocop::read_paired_sample(in);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].pair_id == "IT003/UK002");
    CHECK(rows[2].delta_x == false);

    const auto meta = nlohmann::json::parse(slurp(dir / "a.meta.json"));
    CHECK(meta["pairs"] == 3);
    CHECK(meta["t_star"] == 15.0);
    CHECK(meta["config"]["select"] == "by-assets");
    CHECK(meta["derivation_rule"].get<std::string>().find("panel_start + 1") != std::string::npos);
}

TEST_CASE("cli: input errors exit with status 2")
{
    const auto missing = run({"pair", "--x", kData + "/missing.csv", "--y", kData + "/banks_uk.csv"});
    CHECK(missing.status == 2);
    CHECK(missing.err.find("missing.csv") != std::string::npos);
    CHECK(missing.out.empty());

    CHECK(run({"pair", "--x", kData + "/banks_it.csv", "--y", kData + "/banks_it.csv"}).status == 2);
    CHECK(run({"fit", "-i", kData + "/missing.csv"}).status == 2);
    CHECK(run({"fit"}).status == 2);
    CHECK(run({"bogus"}).status == 2);
    CHECK(run({"simulate", "--family", "Gumbel", "--params", "0.5"}).status == 2);
    CHECK(run({"surface", "--params", "0.5", "--grid", "1"}).status == 2);
    CHECK(run({"fit", "-i", kData + "/banks_it.csv"}).status == 2);
    CHECK(run({"--help"}).status == 0);
}

TEST_CASE("cli: simulate is deterministic and honours theta = 0")
{
    const auto a = run({"simulate", "--family", "MO", "--params", "0.5", "-n", "10", "--seed", "7"});
    const auto b = run({"simulate", "--family", "MO", "--params", "0.5", "-n", "10", "--seed", "7"});
    REQUIRE(a.status == 0);
    CHECK(a.out == b.out);
    std::istringstream in(a.out);
    CHECK(mocop::read_paired_sample(in).size() == 10);

    const auto indep = run({"simulate", "--params", "0", "-n", "1000", "--seed", "1", "--format", "json"});
    REQUIRE(indep.status == 0);
    const auto j = nlohmann::json::parse(indep.out);
    CHECK(j["ties"] == 0);
    CHECK(j["config"]["seed"] == 1);
    CHECK(j["rows"].size() == 1000);
}

TEST_CASE("cli: fit reports rows, verdicts and the censored reduction")
{
    TempDir dir;
    REQUIRE(run({"simulate", "--params", "0.5", "-n", "400", "--seed", "11", "-o", dir / "s.csv"}).status == 0);
    const auto fit = run({"fit", "-i", dir / "s.csv", "--families", "MO,Gaussian,Gumbel,F+C+G", "--censored",
                          "--format", "json"});
    CHECK(fit.status <= 1);
    const auto j = nlohmann::json::parse(fit.out);
    CHECK(j["config"]["families"].size() == 4);
    CHECK(j["config"]["seed"] == 0);
    REQUIRE(j["results"].size() == 5);
    const auto& complete = j["results"][0];
    const auto& censored = j["results"][1];
    CHECK(complete["sample"] == "complete");
    CHECK(censored["sample"] == "censored");
    CHECK(std::abs(complete["params"]["theta"].get<double>() - censored["params"]["theta"].get<double>()) < 1e-12);
    CHECK(complete["tail"]["upper"] == complete["params"]["theta"]);
    CHECK(complete["verdict"].is_string());
    CHECK(j["results"][4]["family"] == "F+C+G");

    // JSON round-trips through a re-parse.
    CHECK(nlohmann::json::parse(j.dump()) == j);

    const auto table = run({"fit", "-i", dir / "s.csv", "--families", "MO"});
    CHECK(table.status == 0);
    CHECK(table.out.find("dominates") != std::string::npos);
    const auto csv = run({"fit", "-i", dir / "s.csv", "--families", "MO", "--format", "csv"});
    CHECK(csv.out.rfind("family,sample,params", 0) == 0);
}

TEST_CASE("cli: boundary estimates exit with status 1")
{
    const auto fit = run({"fit", "-i", kData + "/paired_ties.csv", "--families", "MO"});
    CHECK(fit.status == 1);
    CHECK(fit.out.find("boundary-estimate") != std::string::npos);
}

TEST_CASE("cli: gof output is reproducible and records the seed")
{
    TempDir dir;
    REQUIRE(run({"simulate", "--params", "0.6", "-n", "120", "--seed", "2", "-o", dir / "s.csv"}).status == 0);
    const std::vector<std::string> args{"gof", "-i", dir / "s.csv", "--families", "MO,Gaussian", "--replicates",
                                        "100", "--seed", "9", "--format", "json"};
    const auto a = run(args);
    const auto b = run(args);
    REQUIRE(a.status <= 1);
    CHECK(a.out == b.out);
    const auto j = nlohmann::json::parse(a.out);
    CHECK(j["config"]["seed"] == 9);
    CHECK(j["results"][0]["replicates"] == 100);
    CHECK(j["results"][0]["seed"] == 9);
    CHECK(j["results"][0]["p_value"].get<double>() > 0.0);
    CHECK(run({"gof", "-i", dir / "s.csv", "--replicates", "50"}).status == 2);
}

TEST_CASE("cli: surface grid")
{
    const auto small = run({"surface", "--params", "0.37", "--grid", "3"});
    REQUIRE(small.status == 0);
    std::istringstream in(small.out);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) {
        lines.push_back(line);
    }
    REQUIRE(lines.size() == 10);
    CHECK(lines[0] == "u,v,c");
    CHECK(lines[1] == "0,0,0");
    CHECK(lines[3] == "0,1,0");
    CHECK(lines[7] == "1,0,0");
    CHECK(lines[8] == "1,0.5,0.5");
    CHECK(lines[9] == "1,1,1");

    const auto corners = run({"surface", "--params", "0.37", "--grid", "2", "--format", "json"});
    const auto j = nlohmann::json::parse(corners.out);
    CHECK(j["rows"].size() == 4);

    const auto grid = nlohmann::json::parse(run({"surface", "--family", "Gumbel", "--params", "1.33", "--grid", "11",
                                                 "--format", "json"})
                                                .out);
    const auto& rows = grid["rows"];
    for (std::size_t i = 0; i < 11; ++i) {
        for (std::size_t k = 1; k < 11; ++k) {
            CHECK(rows[i * 11 + k][2].get<double>() >= rows[i * 11 + k - 1][2].get<double>());
            CHECK(rows[k * 11 + i][2].get<double>() >= rows[(k - 1) * 11 + i][2].get<double>());
        }
    }
}

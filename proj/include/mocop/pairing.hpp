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

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mocop/marginals.hpp"

namespace mocop {

/// One bank as read from the input CSV. The distress score is an externally
/// estimated probability of distress; it is only used for ranking.
struct BankRecord {
    std::string bank_id;
    std::string country;
    double total_assets = 0.0;
    double distress_score = 0.0;
    std::optional<int> failure_year;
    int panel_start = 0;
    int panel_end = 0;

    friend bool operator==(const BankRecord&, const BankRecord&) = default;
};

/// Reads `bank_id,country,total_assets,distress_score,failure_year,panel_start,panel_end`
/// (header required, any column order, empty failure_year = never failed).
/// All row problems are collected and reported together in one InputError.
std::vector<BankRecord> ingest(std::istream& in, std::string_view source = "<input>");
std::vector<BankRecord> ingest_file(const std::filesystem::path& path);

/// Which banks of the larger country survive truncation to the smaller size.
enum class SelectionRule { ByAssets, ByDistress };

std::string_view selection_rule_name(SelectionRule rule);
SelectionRule parse_selection_rule(std::string_view name);

struct PairedCohort {
    std::vector<std::pair<BankRecord, BankRecord>> pairs;
    SelectionRule selection = SelectionRule::ByAssets;
    int origin_offset = 1; ///< time = failure_year - panel_start + origin_offset

    std::string derivation_rule() const;
};

/// Truncates the larger country by `rule`, sorts both sides by distress score
/// (descending, ties by bank_id) and pairs them rank by rank. `a` is the X side.
PairedCohort pair_countries(std::span<const BankRecord> a, std::span<const BankRecord> b,
                            SelectionRule rule = SelectionRule::ByAssets, int origin_offset = 1);

struct CensoredTimes {
    std::vector<TimeObservation> x;
    std::vector<TimeObservation> y;
    double t_star = 0.0;
};

/// Type-I censoring at t* = the largest observed failure time in the cohort; banks
/// that never failed are recorded at t* as censored.
CensoredTimes build_censored(const PairedCohort& cohort);

/// Audit row: `pair_id,u,v,delta_x,delta_y,x_time,y_time`. Times may be absent.
struct PairedSampleRow {
    std::string pair_id;
    double u = 0.0;
    double v = 0.0;
    bool delta_x = true;
    bool delta_y = true;
    std::optional<double> x_time;
    std::optional<double> y_time;
};

inline constexpr std::string_view kPairedSampleHeader = "pair_id,u,v,delta_x,delta_y,x_time,y_time";

void write_paired_sample(std::ostream& out, std::span<const PairedSampleRow> rows);
std::vector<PairedSampleRow> read_paired_sample(std::istream& in, std::string_view source = "<input>");

/// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

/// Quotes a field when it holds a comma, quote or line break.
std::string quote_csv(std::string_view field);

/// Splits one CSV record; double quotes delimit fields and "" is a literal quote.
std::vector<std::string> split_csv_line(std::string_view line);

} // namespace mocop

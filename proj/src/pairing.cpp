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

#include "mocop/pairing.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "mocop/error.hpp"

namespace mocop {

namespace {

constexpr std::array<std::string_view, 7> kBankColumns{"bank_id",    "country",     "total_assets", "distress_score",
                                                       "failure_year", "panel_start", "panel_end"};

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

template <class T>
std::optional<T> parse_number(std::string_view text)
{
    text = trim(text);
    if (text.empty()) {
        return std::nullopt;
    }
    if (text.front() == '+') {
        text.remove_prefix(1);
    }
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        return std::nullopt;
    }
    return value;
}

bool getline_record(std::istream& in, std::string& line)
{
    if (!std::getline(in, line)) {
        return false;
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    return true;
}

// Maps each required column to its index in the header; reports missing ones.
std::map<std::string, std::size_t, std::less<>> index_header(const std::vector<std::string>& header,
                                                              std::span<const std::string_view> required,
                                                              std::string_view source)
{
    std::map<std::string, std::size_t, std::less<>> index;
    for (std::size_t i = 0; i < header.size(); ++i) {
        index.emplace(std::string(trim(header[i])), i);
    }
    std::vector<std::string> missing;
    for (auto name : required) {
        if (!index.contains(name)) {
            missing.emplace_back(name);
        }
    }
    if (!missing.empty()) {
        std::ostringstream msg;
        msg << source << ": missing required column(s):";
        for (const auto& m : missing) {
            msg << " " << m;
        }
        throw InputError(msg.str());
    }
    return index;
}

std::string_view strip_bom(std::string_view s)
{
    if (s.starts_with("\xEF\xBB\xBF")) {
        s.remove_prefix(3);
    }
    return s;
}

} // namespace

std::vector<std::string> split_csv_line(std::string_view line)
{
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

std::string format_number(double value)
{
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return {buf.data(), ptr};
}

std::vector<BankRecord> ingest(std::istream& in, std::string_view source)
{
    std::string line;
    if (!getline_record(in, line)) {
        throw InputError(std::string(source) + ": empty input, header row required");
    }
    const auto header = split_csv_line(strip_bom(line));
    const auto index = index_header(header, kBankColumns, source);
    auto column = [&](const std::vector<std::string>& fields, std::string_view name) -> std::string_view {
        const auto i = index.find(name)->second;
        return i < fields.size() ? trim(fields[i]) : std::string_view{};
    };

    std::vector<BankRecord> records;
    std::vector<std::string> problems;
    std::map<std::string, std::size_t, std::less<>> seen;
    std::size_t line_no = 1;
    while (getline_record(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto fields = split_csv_line(line);
        const auto problems_before = problems.size();
        auto report = [&](const std::string& what) {
            problems.push_back(std::string(source) + ":" + std::to_string(line_no) + ": " + what);
        };
        if (fields.size() != header.size()) {
            report("expected " + std::to_string(header.size()) + " fields, found " + std::to_string(fields.size()));
            continue;
        }

        BankRecord rec;
        rec.bank_id = std::string(column(fields, "bank_id"));
        rec.country = std::string(column(fields, "country"));
        if (rec.bank_id.empty()) {
            report("empty bank_id");
        }
        if (rec.country.empty()) {
            report("empty country");
        }
        const auto assets = parse_number<double>(column(fields, "total_assets"));
        if (!assets || !std::isfinite(*assets) || *assets < 0.0) {
            report("total_assets must be a non-negative number, got '" + std::string(column(fields, "total_assets")) + "'");
        } else {
            rec.total_assets = *assets;
        }
        const auto score = parse_number<double>(column(fields, "distress_score"));
        if (!score || !(*score >= 0.0 && *score <= 1.0)) {
            report("distress_score must lie in [0, 1], got '" + std::string(column(fields, "distress_score")) + "'");
        } else {
            rec.distress_score = *score;
        }
        const auto start = parse_number<int>(column(fields, "panel_start"));
        const auto end = parse_number<int>(column(fields, "panel_end"));
        if (!start) {
            report("panel_start must be an integer year");
        }
        if (!end) {
            report("panel_end must be an integer year");
        }
        if (start && end) {
            rec.panel_start = *start;
            rec.panel_end = *end;
            if (*start > *end) {
                report("panel_start after panel_end");
            }
        }
        const auto failure_text = column(fields, "failure_year");
        if (!failure_text.empty()) {
            const auto year = parse_number<int>(failure_text);
            if (!year) {
                report("failure_year must be an integer year or empty, got '" + std::string(failure_text) + "'");
            } else {
                rec.failure_year = *year;
                if (start && end && (*year < *start || *year > *end)) {
                    report("failure_year " + std::to_string(*year) + " outside panel [" + std::to_string(*start) + ", " +
                           std::to_string(*end) + "]");
                }
            }
        }
        if (!rec.bank_id.empty()) {
            const auto [it, fresh] = seen.emplace(rec.bank_id, line_no);
            if (!fresh) {
                report("duplicate bank_id '" + rec.bank_id + "' (first seen on line " + std::to_string(it->second) + ")");
            }
        }
        if (problems.size() == problems_before) {
            records.push_back(std::move(rec));
        }
    }

    if (!problems.empty()) {
        std::ostringstream msg;
        msg << problems.size() << " invalid row(s):";
        for (const auto& p : problems) {
            msg << "\n  " << p;
        }
        throw InputError(msg.str());
    }
    return records;
}

std::vector<BankRecord> ingest_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open input file " + path.string());
    }
    return ingest(in, path.string());
}

std::string_view selection_rule_name(SelectionRule rule)
{
    return rule == SelectionRule::ByAssets ? "by-assets" : "by-distress";
}

SelectionRule parse_selection_rule(std::string_view name)
{
    if (name == "by-assets" || name == "assets") {
        return SelectionRule::ByAssets;
    }
    if (name == "by-distress" || name == "distress") {
        return SelectionRule::ByDistress;
    }
    throw InputError("unknown selection rule '" + std::string(name) + "' (by-assets | by-distress)");
}

std::string PairedCohort::derivation_rule() const
{
    return "time = failure_year - panel_start + " + std::to_string(origin_offset) +
           "; non-failed banks censored at t* = max observed time";
}

namespace {

bool riskier(const BankRecord& a, const BankRecord& b)
{
    if (a.distress_score != b.distress_score) {
        return a.distress_score > b.distress_score;
    }
    return a.bank_id < b.bank_id;
}

bool larger(const BankRecord& a, const BankRecord& b)
{
    if (a.total_assets != b.total_assets) {
        return a.total_assets > b.total_assets;
    }
    return a.bank_id < b.bank_id;
}

std::vector<BankRecord> truncate(std::span<const BankRecord> banks, std::size_t size, SelectionRule rule)
{
    std::vector<BankRecord> kept(banks.begin(), banks.end());
    std::sort(kept.begin(), kept.end(), rule == SelectionRule::ByAssets ? larger : riskier);
    kept.resize(std::min(size, kept.size()));
    std::sort(kept.begin(), kept.end(), riskier);
    return kept;
}

} // namespace

PairedCohort pair_countries(std::span<const BankRecord> a, std::span<const BankRecord> b, SelectionRule rule,
                            int origin_offset)
{
    if (a.empty() || b.empty()) {
        throw InputError("pairing needs banks from both countries");
    }
    const std::size_t size = std::min(a.size(), b.size());
    const auto left = truncate(a, size, rule);
    const auto right = truncate(b, size, rule);

    PairedCohort cohort;
    cohort.selection = rule;
    cohort.origin_offset = origin_offset;
    cohort.pairs.reserve(size);
    for (std::size_t i = 0; i < size; ++i) {
        cohort.pairs.emplace_back(left[i], right[i]);
    }
    return cohort;
}

CensoredTimes build_censored(const PairedCohort& cohort)
{
    if (cohort.pairs.empty()) {
        throw InputError("cannot censor an empty cohort");
    }
    auto time_of = [&](const BankRecord& bank) -> std::optional<double> {
        if (!bank.failure_year) {
            return std::nullopt;
        }
        return static_cast<double>(*bank.failure_year - bank.panel_start + cohort.origin_offset);
    };

    CensoredTimes out;
    bool any_failure = false;
    for (const auto& [x, y] : cohort.pairs) {
        for (const auto* bank : {&x, &y}) {
            if (const auto t = time_of(*bank)) {
                if (!(*t > 0.0)) {
                    throw InputError("bank " + bank->bank_id + " maps to non-positive failure time " + format_number(*t));
                }
                out.t_star = any_failure ? std::max(out.t_star, *t) : *t;
                any_failure = true;
            }
        }
    }
    if (!any_failure) {
        throw InputError("no observed failures in the cohort: the censoring time t* is undefined");
    }
    auto observe = [&](const BankRecord& bank) {
        const auto t = time_of(bank);
        return t ? TimeObservation{*t, true} : TimeObservation{out.t_star, false};
    };
    for (const auto& [x, y] : cohort.pairs) {
        out.x.push_back(observe(x));
        out.y.push_back(observe(y));
    }
    return out;
}

std::string quote_csv(std::string_view field)
{
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
        out += c;
        if (c == '"') {
            out += '"';
        }
    }
    return out + '"';
}

void write_paired_sample(std::ostream& out, std::span<const PairedSampleRow> rows)
{
    out << kPairedSampleHeader << '\n';
    for (const auto& row : rows) {
        out << quote_csv(row.pair_id) << ',' << format_number(row.u) << ',' << format_number(row.v) << ',' << (row.delta_x ? 1 : 0)
            << ',' << (row.delta_y ? 1 : 0) << ',' << (row.x_time ? format_number(*row.x_time) : "") << ','
            << (row.y_time ? format_number(*row.y_time) : "") << '\n';
    }
}

std::vector<PairedSampleRow> read_paired_sample(std::istream& in, std::string_view source)
{
    static constexpr std::array<std::string_view, 7> kColumns{"pair_id", "u", "v", "delta_x", "delta_y", "x_time", "y_time"};
    std::string line;
    if (!getline_record(in, line)) {
        throw InputError(std::string(source) + ": empty paired-sample file");
    }
    const auto header = split_csv_line(strip_bom(line));
    const auto index = index_header(header, kColumns, source);
    auto column = [&](const std::vector<std::string>& fields, std::string_view name) -> std::string_view {
        const auto i = index.find(name)->second;
        return i < fields.size() ? trim(fields[i]) : std::string_view{};
    };

    std::vector<PairedSampleRow> rows;
    std::size_t line_no = 1;
    while (getline_record(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto fields = split_csv_line(line);
        auto fail = [&](const std::string& what) {
            throw InputError(std::string(source) + ":" + std::to_string(line_no) + ": " + what);
        };
        if (fields.size() != header.size()) {
            fail("expected " + std::to_string(header.size()) + " fields, found " + std::to_string(fields.size()));
        }
        PairedSampleRow row;
        row.pair_id = std::string(column(fields, "pair_id"));
        const auto u = parse_number<double>(column(fields, "u"));
        const auto v = parse_number<double>(column(fields, "v"));
        if (!u || !v) {
            fail("u and v must be numbers");
        }
        if (!(*u > 0.0 && *u < 1.0 && *v > 0.0 && *v < 1.0)) {
            fail("u and v must lie strictly inside (0, 1)");
        }
        row.u = *u;
        row.v = *v;
        auto flag = [&](std::string_view name) {
            const auto text = column(fields, name);
            if (text == "1") {
                return true;
            }
            if (text == "0") {
                return false;
            }
            fail(std::string(name) + " must be 0 or 1");
            return false;
        };
        row.delta_x = flag("delta_x");
        row.delta_y = flag("delta_y");
        auto time = [&](std::string_view name) -> std::optional<double> {
            const auto text = column(fields, name);
            if (text.empty()) {
                return std::nullopt;
            }
            const auto t = parse_number<double>(text);
            if (!t) {
                fail(std::string(name) + " must be a number or empty");
            }
            return t;
        };
        row.x_time = time("x_time");
        row.y_time = time("y_time");
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace mocop

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

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mocop/copula.hpp"
#include "mocop/error.hpp"
#include "mocop/estimation.hpp"
#include "mocop/gof.hpp"
#include "mocop/marginals.hpp"
#include "mocop/pairing.hpp"

namespace mocop::cli {

namespace {

using nlohmann::ordered_json;

const std::vector<std::string> kDefaultFamilies{"MO", "Gaussian", "Gumbel", "Frank", "Clayton", "F+C+G"};

struct Config {
    std::string command;
    std::string input;
    std::string x_input;
    std::string y_input;
    std::string output;
    std::vector<std::string> families = kDefaultFamilies;
    bool censored = false;
    std::string tstar_mode = "log";
    double tie_tol = 0.0;
    std::size_t replicates = 1000;
    std::uint64_t seed = 0;
    std::string format = "table";
    std::string margins = "pooled";
    std::string select = "by-assets";
    int origin_offset = 1;
    std::string family = "MO";
    std::vector<double> params;
    std::size_t n = 500;
    std::optional<double> censor_quantile;
    int grid = 21;
    std::size_t threads = 0;
    std::size_t starts = 5;
};

ordered_json config_json(const Config& c)
{
    ordered_json j;
    j["command"] = c.command;
    if (c.command == "pair") {
        j["x"] = c.x_input;
        j["y"] = c.y_input;
        j["select"] = c.select;
        j["origin_offset"] = c.origin_offset;
        j["margins"] = c.margins;
    } else if (c.command == "fit" || c.command == "gof") {
        j["input"] = c.input;
        j["families"] = c.families;
        j["censored"] = c.censored;
        j["tstar_mode"] = c.tstar_mode;
        j["tie_tol"] = c.tie_tol;
        j["margins"] = c.margins;
        j["seed"] = c.seed;
        j["starts"] = c.starts;
        if (c.command == "gof") {
            j["replicates"] = c.replicates;
        }
    } else {
        j["family"] = c.family;
        j["params"] = c.params;
        if (c.command == "simulate") {
            j["n"] = c.n;
            j["seed"] = c.seed;
            j["censor_quantile"] = c.censor_quantile ? ordered_json(*c.censor_quantile) : ordered_json(nullptr);
            j["margins"] = c.margins;
        } else {
            j["grid"] = c.grid;
        }
    }
    j["format"] = c.format;
    j["output"] = c.output.empty() ? ordered_json(nullptr) : ordered_json(c.output);
    return j;
}

MarginMode margin_mode(const Config& c)
{
    return c.margins == "separate" ? MarginMode::Separate : MarginMode::Pooled;
}

CensorContribution contribution(const Config& c)
{
    return c.tstar_mode == "literal" ? CensorContribution::Literal : CensorContribution::LogTransformed;
}

std::string fixed(double x, int digits = 4)
{
    if (std::isnan(x)) {
        return "NA";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << x;
    return s.str();
}

ordered_json number_or_null(double x)
{
    return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr);
}

std::string params_text(const CopulaSpec& spec)
{
    std::string out;
    const auto names = parameter_names(spec.family());
    for (std::size_t i = 0; i < names.size(); ++i) {
        out += (i ? " " : "") + std::string(names[i]) + "=" + fixed(spec.param(i));
    }
    return out;
}

ordered_json params_json(const CopulaSpec& spec)
{
    ordered_json j = ordered_json::object();
    const auto names = parameter_names(spec.family());
    for (std::size_t i = 0; i < names.size(); ++i) {
        j[std::string(names[i])] = spec.param(i);
    }
    return j;
}

std::vector<std::string> flag_names(const FitFlags& f)
{
    std::vector<std::string> out;
    if (f.boundary_estimate) {
        out.emplace_back("boundary-estimate");
    }
    if (f.no_ties) {
        out.emplace_back("no-ties");
    }
    if (f.degenerate_sample) {
        out.emplace_back("degenerate-sample");
    }
    return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep)
{
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        out += (i ? std::string(sep) : std::string()) + parts[i];
    }
    return out;
}

/// Writes to the -o file, or to `out` when none was given.
template <class Fn>
void emit(const Config& c, std::ostream& out, Fn&& write)
{
    if (c.output.empty()) {
        write(out);
        return;
    }
    std::ofstream file(c.output, std::ios::binary);
    if (!file) {
        throw InputError("cannot open output file " + c.output);
    }
    write(file);
    if (!file) {
        throw InputError("failed writing " + c.output);
    }
}

void write_sidecar(const Config& c, ordered_json meta)
{
    if (c.output.empty()) {
        return;
    }
    auto path = std::filesystem::path(c.output);
    path.replace_extension(".meta.json");
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw InputError("cannot open metadata file " + path.string());
    }
    file << meta.dump(2) << '\n';
}

// ---------------------------------------------------------------- samples

struct LoadedSample {
    std::vector<PairedSampleRow> rows;
    PseudoSample complete;
    std::optional<CensoredSample> censored;
};

std::vector<PairedSampleRow> load_rows(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open input file " + path);
    }
    auto rows = read_paired_sample(in, path);
    if (rows.empty()) {
        throw InputError(path + ": paired-sample file has no rows");
    }
    return rows;
}

// Pairs with both failures observed. When censoring removed pairs and failure
// times are present, the survivors are re-ranked among themselves; otherwise the
// file's pseudo-observations are used as they are.
PseudoSample complete_subsample(const std::vector<PairedSampleRow>& rows, const Config& c)
{
    std::vector<const PairedSampleRow*> both;
    for (const auto& r : rows) {
        if (r.delta_x && r.delta_y) {
            both.push_back(&r);
        }
    }
    if (both.empty()) {
        throw DegenerateSampleError("no pair has both failures observed");
    }
    const bool subset = both.size() < rows.size();
    const bool timed = std::all_of(both.begin(), both.end(), [](const auto* r) { return r->x_time && r->y_time; });
    std::vector<UnitPair> pairs;
    if (subset && timed) {
        std::vector<TimeObservation> x;
        std::vector<TimeObservation> y;
        for (const auto* r : both) {
            x.push_back({*r->x_time, true});
            y.push_back({*r->y_time, true});
        }
        for (const auto& o : pseudo_observations(x, y, false, margin_mode(c))) {
            pairs.push_back(o.p);
        }
    } else {
        for (const auto* r : both) {
            pairs.push_back({r->u, r->v});
        }
    }
    return classify_complete(pairs, c.tie_tol);
}

CensoredSample censored_sample(const std::vector<PairedSampleRow>& rows, const Config& c)
{
    std::vector<PseudoObservation> obs;
    double t_star = 0.0;
    for (const auto& r : rows) {
        obs.push_back({{r.u, r.v}, r.delta_x, r.delta_y});
        for (const auto& t : {r.x_time, r.y_time}) {
            if (t) {
                t_star = std::max(t_star, *t);
            }
        }
    }
    return classify_censored(obs, t_star, contribution(c), c.tie_tol);
}

std::vector<Family> families(const Config& c)
{
    std::vector<Family> out;
    for (const auto& name : c.families) {
        const auto f = parse_family(name);
        if (std::find(out.begin(), out.end(), f) == out.end()) {
            out.push_back(f);
        }
    }
    if (out.empty()) {
        throw InputError("no families requested");
    }
    return out;
}

// ---------------------------------------------------------------- fit

struct FitRow {
    Family family = Family::MO;
    std::string sample; // "complete" or "censored"
    std::optional<FitResult> fit;
    std::string error;
};

ordered_json fit_row_json(const FitRow& row)
{
    ordered_json j;
    j["family"] = family_name(row.family);
    j["sample"] = row.sample;
    if (!row.fit) {
        j["error"] = row.error;
        return j;
    }
    const auto& f = *row.fit;
    const auto tail = tail_dependence(f.spec);
    j["params"] = params_json(f.spec);
    j["loglik"] = number_or_null(f.loglik);
    j["aicc"] = number_or_null(f.aic_c);
    j["tail"] = {{"lower", tail.lower}, {"upper", tail.upper}};
    j["method"] = method_name(f.method);
    j["flags"] = flag_names(f.flags);
    j["n"] = f.n;
    if (row.family == Family::MO) {
        j["verdict"] = shock_verdict(f.spec.param(0));
    }
    if (!row.error.empty()) {
        j["error"] = row.error;
    }
    return j;
}

FitRow run_fit(Family family, const PseudoSample& sample, const Config& c)
{
    FitRow row{family, "complete", std::nullopt, {}};
    try {
        row.fit = fit_family(family, sample, {c.seed, c.starts, 5000});
    } catch (const FitError& e) {
        row.fit = e.best();
        row.error = e.what();
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

int cmd_fit(const Config& c, std::ostream& out)
{
    const auto rows = load_rows(c.input);
    std::vector<FitRow> results;
    std::optional<PseudoSample> complete;
    std::string complete_error;
    try {
        complete = complete_subsample(rows, c);
    } catch (const DegenerateSampleError& e) {
        complete_error = e.what();
    }
    for (const auto family : families(c)) {
        if (complete) {
            results.push_back(run_fit(family, *complete, c));
        } else {
            results.push_back({family, "complete", std::nullopt, complete_error});
        }
        if (family == Family::MO && c.censored) {
            FitRow row{family, "censored", std::nullopt, {}};
            try {
                row.fit = fit_mo_censored(censored_sample(rows, c));
            } catch (const DegenerateSampleError& e) {
                row.error = e.what();
            }
            results.push_back(std::move(row));
        }
    }

    bool warn = false;
    for (const auto& r : results) {
        warn = warn || !r.fit || !r.error.empty() || r.fit->flags.any();
    }

    emit(c, out, [&](std::ostream& o) {
        if (c.format == "json") {
            ordered_json j;
            j["config"] = config_json(c);
            j["results"] = ordered_json::array();
            for (const auto& r : results) {
                j["results"].push_back(fit_row_json(r));
            }
            o << j.dump(2) << '\n';
        } else if (c.format == "csv") {
            o << "family,sample,params,loglik,aicc,lower_tail,upper_tail,method,flags,verdict,error\n";
            for (const auto& r : results) {
                o << quote_csv(family_name(r.family)) << ',' << r.sample << ',';
                if (r.fit) {
                    const auto& f = *r.fit;
                    const auto tail = tail_dependence(f.spec);
                    std::vector<std::string> ps;
                    const auto names = parameter_names(f.spec.family());
                    for (std::size_t i = 0; i < names.size(); ++i) {
                        ps.push_back(std::string(names[i]) + "=" + format_number(f.spec.param(i)));
                    }
                    o << join(ps, ";") << ',' << format_number(f.loglik) << ','
                      << (std::isnan(f.aic_c) ? "" : format_number(f.aic_c)) << ',' << format_number(tail.lower) << ','
                      << format_number(tail.upper) << ',' << method_name(f.method) << ','
                      << join(flag_names(f.flags), ";") << ','
                      << (r.family == Family::MO ? std::string(shock_verdict(f.spec.param(0))) : "");
                } else {
                    o << ",,,,,,,";
                }
                o << ',' << quote_csv(r.error) << '\n';
            }
        } else {
            o << std::left << std::setw(10) << "family" << std::setw(10) << "sample" << std::setw(60) << "parameters"
              << std::right << std::setw(12) << "loglik" << std::setw(12) << "AIC-c" << std::setw(9) << "chi_l"
              << std::setw(9) << "chi_u" << "  " << std::left << std::setw(12) << "method" << "flags\n";
            for (const auto& r : results) {
                o << std::left << std::setw(10) << family_name(r.family) << std::setw(10) << r.sample;
                if (r.fit) {
                    const auto& f = *r.fit;
                    const auto tail = tail_dependence(f.spec);
                    const auto flags = flag_names(f.flags);
                    o << std::setw(60) << params_text(f.spec) << std::right << std::setw(12) << fixed(f.loglik)
                      << std::setw(12) << fixed(f.aic_c) << std::setw(9) << fixed(tail.lower) << std::setw(9)
                      << fixed(tail.upper) << "  " << std::left << std::setw(12) << method_name(f.method)
                      << (flags.empty() ? "-" : join(flags, ","));
                    if (!r.error.empty()) {
                        o << "  [" << r.error << "]";
                    }
                } else {
                    o << "error: " << r.error;
                }
                o << '\n';
            }
            for (const auto& r : results) {
                if (r.family == Family::MO && r.fit) {
                    o << "MO " << r.sample << ": theta = " << fixed(r.fit->spec.param(0)) << ", "
                      << shock_verdict(r.fit->spec.param(0)) << '\n';
                }
            }
            o << "seed: " << c.seed << '\n';
        }
    });
    return warn ? kEstimationWarning : kOk;
}

// ---------------------------------------------------------------- gof

int cmd_gof(const Config& c, std::ostream& out)
{
    const auto rows = load_rows(c.input);
    const auto sample = complete_subsample(rows, c);
    BootstrapOptions options;
    options.replicates = c.replicates;
    options.seed = c.seed;
    options.ranking = margin_mode(c);
    options.tie_tol = c.tie_tol;
    options.threads = c.threads;
    options.numeric.starts = c.starts;

    struct Row {
        Family family;
        std::optional<GofReport> report;
        std::string error;
    };
    std::vector<Row> results;
    bool warn = false;
    for (const auto family : families(c)) {
        Row row{family, std::nullopt, {}};
        try {
            row.report = bootstrap_pvalue(sample, family, options);
            warn = warn || row.report->fitted.flags.any() || row.report->failed_replicates > 0;
        } catch (const FitError& e) {
            row.error = e.what();
            warn = true;
        } catch (const DegenerateSampleError& e) {
            row.error = e.what();
            warn = true;
        }
        results.push_back(std::move(row));
    }

    emit(c, out, [&](std::ostream& o) {
        if (c.format == "json") {
            ordered_json j;
            j["config"] = config_json(c);
            j["n"] = sample.size();
            j["results"] = ordered_json::array();
            for (const auto& r : results) {
                ordered_json e;
                e["family"] = family_name(r.family);
                if (r.report) {
                    const auto& g = *r.report;
                    e["params"] = params_json(g.fitted.spec);
                    e["loglik"] = number_or_null(g.fitted.loglik);
                    e["aicc"] = number_or_null(g.fitted.aic_c);
                    e["statistic"] = g.statistic;
                    e["p_value"] = g.p_value;
                    e["replicates"] = g.replicates;
                    e["exceedances"] = g.exceedances;
                    e["failed_replicates"] = g.failed_replicates;
                    e["seed"] = g.seed;
                    e["flags"] = flag_names(g.fitted.flags);
                    e["warnings"] = g.warnings;
                    if (r.family == Family::MO) {
                        e["verdict"] = shock_verdict(g.fitted.spec.param(0));
                    }
                } else {
                    e["error"] = r.error;
                }
                j["results"].push_back(e);
            }
            o << j.dump(2) << '\n';
        } else if (c.format == "csv") {
            o << "family,statistic,p_value,aicc,replicates,exceedances,failed_replicates,seed,error\n";
            for (const auto& r : results) {
                o << quote_csv(family_name(r.family)) << ',';
                if (r.report) {
                    const auto& g = *r.report;
                    o << format_number(g.statistic) << ',' << format_number(g.p_value) << ','
                      << (std::isnan(g.fitted.aic_c) ? "" : format_number(g.fitted.aic_c)) << ',' << g.replicates
                      << ',' << g.exceedances << ',' << g.failed_replicates << ',' << g.seed << ",\n";
                } else {
                    o << ",,,,,,," << quote_csv(r.error) << '\n';
                }
            }
        } else {
            o << std::left << std::setw(10) << "family" << std::right << std::setw(12) << "AIC-c" << std::setw(12)
              << "S_n" << std::setw(10) << "p-value" << std::setw(12) << "replicates" << std::setw(8) << "failed"
              << '\n';
            for (const auto& r : results) {
                o << std::left << std::setw(10) << family_name(r.family);
                if (r.report) {
                    const auto& g = *r.report;
                    o << std::right << std::setw(12) << fixed(g.fitted.aic_c) << std::setw(12) << fixed(g.statistic, 5)
                      << std::setw(10) << fixed(g.p_value, 3) << std::setw(12) << g.replicates << std::setw(8)
                      << g.failed_replicates;
                } else {
                    o << "error: " << r.error;
                }
                o << '\n';
            }
            for (const auto& r : results) {
                if (r.family == Family::MO && r.report) {
                    const double theta = r.report->fitted.spec.param(0);
                    o << "MO: theta = " << fixed(theta) << ", " << shock_verdict(theta) << '\n';
                }
            }
            o << "n: " << sample.size() << ", seed: " << c.seed << '\n';
        }
    });
    return warn ? kEstimationWarning : kOk;
}

// ---------------------------------------------------------------- pair

std::string single_country(const std::vector<BankRecord>& banks, const std::string& path)
{
    if (banks.empty()) {
        throw InputError(path + ": no banks");
    }
    for (const auto& b : banks) {
        if (b.country != banks.front().country) {
            throw InputError(path + ": expected one country, found '" + banks.front().country + "' and '" +
                             b.country + "'");
        }
    }
    return banks.front().country;
}

int cmd_pair(const Config& c, std::ostream& out)
{
    const auto x = ingest_file(c.x_input);
    const auto y = ingest_file(c.y_input);
    const auto cx = single_country(x, c.x_input);
    const auto cy = single_country(y, c.y_input);
    if (cx == cy) {
        throw InputError("both inputs hold banks of country '" + cx + "'; pairing needs two countries");
    }
    const auto cohort = pair_countries(x, y, parse_selection_rule(c.select), c.origin_offset);
    const auto times = build_censored(cohort);
    const auto obs = pseudo_observations(times.x, times.y, true, margin_mode(c));

    std::vector<PairedSampleRow> rows;
    std::size_t counts[4] = {0, 0, 0, 0}; // both, x only, y only, neither
    for (std::size_t i = 0; i < obs.size(); ++i) {
        const auto& [bx, by] = cohort.pairs[i];
        rows.push_back({bx.bank_id + "/" + by.bank_id, obs[i].p.u, obs[i].p.v, obs[i].delta_x, obs[i].delta_y,
                        times.x[i].time, times.y[i].time});
        ++counts[obs[i].delta_x ? (obs[i].delta_y ? 0 : 1) : (obs[i].delta_y ? 2 : 3)];
    }
    emit(c, out, [&](std::ostream& o) { write_paired_sample(o, rows); });

    ordered_json meta;
    meta["config"] = config_json(c);
    meta["countries"] = {{"x", cx}, {"y", cy}};
    meta["banks"] = {{"x", x.size()}, {"y", y.size()}};
    meta["pairs"] = rows.size();
    meta["t_star"] = times.t_star;
    meta["derivation_rule"] = cohort.derivation_rule();
    meta["ranking_score"] = "distress_score as supplied (single precomputed value per bank)";
    meta["margins"] = c.margins == "separate" ? "Kaplan-Meier per country" : "Kaplan-Meier pooled over both countries";
    meta["failures"] = {{"both", counts[0]}, {"x_only", counts[1]}, {"y_only", counts[2]}, {"neither", counts[3]}};
    write_sidecar(c, meta);
    return kOk;
}

// ---------------------------------------------------------------- simulate / surface

CopulaSpec spec_from(const Config& c)
{
    const auto family = parse_family(c.family);
    if (c.params.size() != parameter_count(family)) {
        throw DomainError(std::string(family_name(family)) + " takes " + std::to_string(parameter_count(family)) +
                          " parameter(s), got " + std::to_string(c.params.size()));
    }
    return CopulaSpec(family, c.params);
}

int cmd_simulate(const Config& c, std::ostream& out)
{
    const auto spec = spec_from(c);
    if (c.n == 0) {
        throw DomainError("n must be positive");
    }
    const auto draws = sample(spec, c.n, c.seed);
    std::vector<PairedSampleRow> rows;
    std::optional<double> t_star;
    if (c.censor_quantile) {
        const double q = *c.censor_quantile;
        if (!(q > 0.0 && q < 1.0)) {
            throw DomainError("censor quantile must lie in (0, 1)");
        }
        // Exponential(1) failure times, type-I censored at their q-quantile.
        t_star = -std::log1p(-q);
        std::vector<TimeObservation> x;
        std::vector<TimeObservation> y;
        for (const auto& p : draws) {
            const double tx = -std::log1p(-p.u);
            const double ty = -std::log1p(-p.v);
            x.push_back(tx <= *t_star ? TimeObservation{tx, true} : TimeObservation{*t_star, false});
            y.push_back(ty <= *t_star ? TimeObservation{ty, true} : TimeObservation{*t_star, false});
        }
        const auto obs = pseudo_observations(x, y, true, margin_mode(c));
        for (std::size_t i = 0; i < obs.size(); ++i) {
            rows.push_back({std::to_string(i + 1), obs[i].p.u, obs[i].p.v, obs[i].delta_x, obs[i].delta_y, x[i].time,
                            y[i].time});
        }
    } else {
        for (std::size_t i = 0; i < draws.size(); ++i) {
            rows.push_back({std::to_string(i + 1), draws[i].u, draws[i].v, true, true, std::nullopt, std::nullopt});
        }
    }
    std::size_t ties = 0;
    for (const auto& p : draws) {
        ties += p.u == p.v ? 1 : 0;
    }

    ordered_json meta;
    meta["config"] = config_json(c);
    meta["spec"] = describe(spec);
    meta["ties"] = ties;
    meta["t_star"] = t_star ? ordered_json(*t_star) : ordered_json(nullptr);
    if (c.format == "json") {
        emit(c, out, [&](std::ostream& o) {
            ordered_json j = meta;
            j["rows"] = ordered_json::array();
            for (const auto& r : rows) {
                j["rows"].push_back({{"pair_id", r.pair_id},
                                     {"u", r.u},
                                     {"v", r.v},
                                     {"delta_x", r.delta_x},
                                     {"delta_y", r.delta_y},
                                     {"x_time", r.x_time ? ordered_json(*r.x_time) : ordered_json(nullptr)},
                                     {"y_time", r.y_time ? ordered_json(*r.y_time) : ordered_json(nullptr)}});
            }
            o << j.dump(2) << '\n';
        });
    } else {
        emit(c, out, [&](std::ostream& o) { write_paired_sample(o, rows); });
        write_sidecar(c, meta);
    }
    return kOk;
}

int cmd_surface(const Config& c, std::ostream& out)
{
    const auto spec = spec_from(c);
    if (c.grid < 2) {
        throw DomainError("grid resolution must be at least 2, got " + std::to_string(c.grid));
    }
    const auto n = static_cast<std::size_t>(c.grid);
    std::vector<double> axis(n);
    for (std::size_t i = 0; i < n; ++i) {
        axis[i] = i + 1 == n ? 1.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    }
    if (c.format == "json") {
        emit(c, out, [&](std::ostream& o) {
            ordered_json j;
            j["config"] = config_json(c);
            j["spec"] = describe(spec);
            j["axis"] = axis;
            j["rows"] = ordered_json::array();
            for (double u : axis) {
                for (double v : axis) {
                    j["rows"].push_back({u, v, cdf(spec, {u, v})});
                }
            }
            o << j.dump(2) << '\n';
        });
        return kOk;
    }
    emit(c, out, [&](std::ostream& o) {
        o << "u,v,c\n";
        for (double u : axis) {
            for (double v : axis) {
                o << format_number(u) << ',' << format_number(v) << ',' << format_number(cdf(spec, {u, v})) << '\n';
            }
        }
    });
    ordered_json meta;
    meta["config"] = config_json(c);
    meta["spec"] = describe(spec);
    write_sidecar(c, meta);
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Config c;
    CLI::App app{"Marshall-Olkin copula analysis of paired bank failures", "mocop"};
    app.require_subcommand(1);

    const std::vector<std::string> formats{"table", "json", "csv"};
    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember(formats))->capture_default_str();
    };
    auto add_output = [&](CLI::App* cmd) { cmd->add_option("-o,--output", c.output, "Output file (default: stdout)"); };
    auto add_margins = [&](CLI::App* cmd) {
        cmd->add_option("--margins", c.margins, "Marginal estimation: pooled over both countries or separate")
            ->check(CLI::IsMember({"pooled", "separate"}))
            ->capture_default_str();
    };
    auto add_seed = [&](CLI::App* cmd) { cmd->add_option("--seed", c.seed, "Random seed")->capture_default_str(); };

    auto* pair = app.add_subcommand("pair", "Pair banks of two countries and write the paired sample");
    pair->add_option("--x", c.x_input, "Bank CSV of the first country (X side)")->required();
    pair->add_option("--y", c.y_input, "Bank CSV of the second country (Y side)")->required();
    pair->add_option("--select", c.select, "Truncation rule for the larger country")
        ->check(CLI::IsMember({"by-assets", "by-distress"}))
        ->capture_default_str();
    pair->add_option("--origin-offset", c.origin_offset, "time = failure_year - panel_start + offset")
        ->capture_default_str();
    add_margins(pair);
    add_output(pair);

    auto add_estimation = [&](CLI::App* cmd) {
        cmd->add_option("-i,--input", c.input, "Paired-sample CSV")->required();
        cmd->add_option("--families", c.families, "Comma-separated copula families")
            ->delimiter(',')
            ->capture_default_str();
        cmd->add_option("--tie-tol", c.tie_tol, "|u - v| <= tol counts as a tie")->capture_default_str();
        cmd->add_option("--starts", c.starts, "Optimizer starts per numeric fit")->capture_default_str();
        add_margins(cmd);
        add_seed(cmd);
        add_format(cmd);
        add_output(cmd);
    };
    auto* fit = app.add_subcommand("fit", "Fit copula families to a paired sample");
    add_estimation(fit);
    fit->add_flag("--censored", c.censored, "Also fit the MO copula with the censored likelihood");
    fit->add_option("--tstar-mode", c.tstar_mode, "Contribution of a censored coordinate")
        ->check(CLI::IsMember({"log", "literal"}))
        ->capture_default_str();

    auto* gof = app.add_subcommand("gof", "Cramer-von Mises goodness of fit with a parametric bootstrap");
    add_estimation(gof);
    gof->add_option("--replicates", c.replicates, "Bootstrap replicates (>= 100)")->capture_default_str();
    gof->add_option("--threads", c.threads, "Worker threads (0: all cores)")->capture_default_str();

    auto add_spec = [&](CLI::App* cmd) {
        cmd->add_option("--family", c.family, "Copula family")->capture_default_str();
        cmd->add_option("--params", c.params, "Comma-separated parameters")->delimiter(',')->required();
    };
    auto* simulate = app.add_subcommand("simulate", "Draw a sample from a copula");
    add_spec(simulate);
    simulate->add_option("-n,--n", c.n, "Sample size")->capture_default_str();
    simulate->add_option("--censor-quantile", c.censor_quantile,
                         "Export exponential failure times censored at this marginal quantile");
    add_margins(simulate);
    add_seed(simulate);
    simulate->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    add_output(simulate);

    auto* surface = app.add_subcommand("surface", "Copula CDF on a regular grid, for surface and contour plots");
    add_spec(surface);
    surface->add_option("--grid", c.grid, "Points per axis (u_i = i / (N - 1))")->capture_default_str();
    surface->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    add_output(surface);

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
        err << "mocop: " << e.what() << '\n';
        return kInputError;
    }

    try {
        if (pair->parsed()) {
            c.command = "pair";
            return cmd_pair(c, out);
        }
        if (fit->parsed()) {
            c.command = "fit";
            return cmd_fit(c, out);
        }
        if (gof->parsed()) {
            c.command = "gof";
            return cmd_gof(c, out);
        }
        if (simulate->parsed()) {
            c.command = "simulate";
            if (c.format == "table") {
                c.format = "csv";
            }
            return cmd_simulate(c, out);
        }
        c.command = "surface";
        if (c.format == "table") {
            c.format = "csv";
        }
        return cmd_surface(c, out);
    } catch (const std::exception& e) {
        err << "mocop: " << e.what() << '\n';
        return kInputError;
    }
}

} // namespace mocop::cli

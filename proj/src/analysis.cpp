// Copyright the apiq authors.
//
// Licensed under the terms of the Apache 2.0 open source license.
// Please refer to the LICENSE file in the project root for the terms.

#include "apiq/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include "apiq/util.hpp"

namespace apiq {

std::string SeriesKey::str() const {
    return endpoint_id + "/" + to_string(protocol) + "/" + vantage;
}

const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::RegionChange: return "REGION_CHANGE";
        case Strategy::HttpToHttps: return "HTTP_2_HTTPS";
        case Strategy::HttpsToHttp: return "HTTPS_2_HTTP";
    }
    return "?";
}

LoadResult build_series(std::vector<ProbeRecord> records, int expected_interval_s,
                        double gap_threshold) {
    if (gap_threshold <= 1.0) throw std::invalid_argument("gap_threshold must be > 1");
    if (expected_interval_s < 1) throw std::invalid_argument("expected_interval_s must be >= 1");

    std::map<SeriesKey, std::vector<ProbeRecord>> by_key;
    for (auto& r : records) {
        SeriesKey key{r.endpoint_id, r.protocol, r.vantage};
        by_key[std::move(key)].push_back(std::move(r));
    }

    LoadResult out;
    const double gap_ms = gap_threshold * expected_interval_s * 1000.0;
    for (auto& [key, recs] : by_key) {
        std::stable_sort(recs.begin(), recs.end(),
                         [](const ProbeRecord& a, const ProbeRecord& b) {
                             return a.timestamp_ms < b.timestamp_ms;
                         });
        Series s;
        s.key = key;
        s.records.reserve(recs.size());
        for (auto& r : recs) {
            if (!s.records.empty() && r.timestamp_ms == s.records.back().timestamp_ms) {
                ++out.duplicate_records;  // same file copied twice; keep the first
                continue;
            }
            if (!s.records.empty()) {
                int64_t spacing = r.timestamp_ms - s.records.back().timestamp_ms;
                if (static_cast<double>(spacing) > gap_ms) {
                    s.gaps.push_back(Gap{s.records.back().timestamp_ms, r.timestamp_ms});
                }
            }
            s.records.push_back(std::move(r));
        }
        out.series.push_back(std::move(s));
    }
    return out;
}

LoadResult load_series(const std::vector<std::string>& files, int expected_interval_s,
                       double gap_threshold) {
    std::vector<ProbeRecord> records;
    int64_t quarantined = 0;
    int64_t files_read = 0;
    for (const auto& path : files) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open log file: " + path);
        ++files_read;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            if (line[0] == '#') continue;  // runner diagnostics
            auto r = decode_probe_record(line);
            if (r) {
                records.push_back(std::move(*r));
            } else {
                ++quarantined;
            }
        }
    }
    LoadResult out = build_series(std::move(records), expected_interval_s, gap_threshold);
    out.quarantined_lines = quarantined;
    out.files_read = files_read;
    return out;
}

AvailabilityReport availability(const Series& s) {
    AvailabilityReport rep;
    rep.records = static_cast<int64_t>(s.records.size());
    if (s.records.empty()) {
        rep.no_data = true;
        return rep;
    }

    if (s.key.protocol == Protocol::Icmp) {
        for (const auto& r : s.records) {
            rep.packets_sent += r.packets_sent;
            rep.packets_lost += r.packets_lost;
        }
        if (rep.packets_sent > 0) {
            rep.pingability = 1.0 - static_cast<double>(rep.packets_lost) /
                                        static_cast<double>(rep.packets_sent);
        } else {
            rep.no_data = true;
        }
        return rep;
    }

    for (const auto& r : s.records) {
        if (r.outcome.status_code) ++rep.status_responses;
        if (r.outcome.cls == OutcomeClass::Success) {
            ++rep.successes;
            continue;
        }
        ++rep.failures;
        switch (r.outcome.cls) {
            case OutcomeClass::ClientError: ++rep.failures_4xx; break;
            case OutcomeClass::ServerError: ++rep.failures_5xx; break;
            default: ++rep.failures_none; break;
        }
    }
    double n = static_cast<double>(rep.records);
    rep.accessibility = static_cast<double>(rep.status_responses) / n;
    rep.successability = static_cast<double>(rep.successes) / n;
    if (rep.failures > 0) {
        double f = static_cast<double>(rep.failures);
        rep.frac_4xx = static_cast<double>(rep.failures_4xx) / f;
        rep.frac_5xx = static_cast<double>(rep.failures_5xx) / f;
        rep.frac_none = static_cast<double>(rep.failures_none) / f;
    }
    return rep;
}

namespace {

bool is_successable(const ProbeRecord& r) { return r.outcome.cls == OutcomeClass::Success; }

// Counterpart series for a failover strategy, relative to the failing series.
bool is_counterpart(Strategy strategy, const SeriesKey& failing, const SeriesKey& other) {
    switch (strategy) {
        case Strategy::RegionChange:
            return other.endpoint_id == failing.endpoint_id &&
                   other.protocol == failing.protocol && other.vantage != failing.vantage;
        case Strategy::HttpToHttps:
            return other.endpoint_id == failing.endpoint_id && other.vantage == failing.vantage &&
                   other.protocol == Protocol::Https;
        case Strategy::HttpsToHttp:
            return other.endpoint_id == failing.endpoint_id && other.vantage == failing.vantage &&
                   other.protocol == Protocol::Http;
    }
    return false;
}

// Protocol whose failures the strategy tries to rescue.
bool strategy_considers(Strategy strategy, const SeriesKey& key) {
    switch (strategy) {
        case Strategy::RegionChange:
            return key.protocol == Protocol::Http || key.protocol == Protocol::Https;
        case Strategy::HttpToHttps: return key.protocol == Protocol::Http;
        case Strategy::HttpsToHttp: return key.protocol == Protocol::Https;
    }
    return false;
}

// Any record / any successable record of `s` within [t - w, t + w]?
struct WindowScan {
    bool any_record = false;
    bool any_success = false;
};

WindowScan scan_window(const Series& s, int64_t t, int64_t w) {
    WindowScan out;
    const auto& recs = s.records;
    auto it = std::lower_bound(recs.begin(), recs.end(), t - w,
                               [](const ProbeRecord& r, int64_t v) { return r.timestamp_ms < v; });
    for (; it != recs.end() && it->timestamp_ms <= t + w; ++it) {
        out.any_record = true;
        if (is_successable(*it)) {
            out.any_success = true;
            return out;
        }
    }
    return out;
}

}  // namespace

StrategyOutcome failover_ratios(const std::vector<Series>& all, Strategy strategy,
                                int alignment_window_s) {
    if (alignment_window_s <= 0) throw std::invalid_argument("alignment_window_s must be > 0");
    const int64_t w = static_cast<int64_t>(alignment_window_s) * 1000;

    StrategyOutcome out;
    out.strategy = strategy;

    std::map<std::string, EndpointFailover> per_endpoint;
    std::set<std::string> endpoints_considered;

    for (const auto& s : all) {
        if (!strategy_considers(strategy, s.key)) continue;
        endpoints_considered.insert(s.key.endpoint_id);

        std::vector<const Series*> counterparts;
        for (const auto& o : all) {
            if (is_counterpart(strategy, s.key, o.key)) counterparts.push_back(&o);
        }

        auto& agg = per_endpoint[s.key.endpoint_id];
        agg.endpoint_id = s.key.endpoint_id;
        for (const auto& r : s.records) {
            if (is_successable(r)) continue;
            ++agg.failures;
            bool any_record = false;
            bool any_success = false;
            for (const Series* c : counterparts) {
                WindowScan ws = scan_window(*c, r.timestamp_ms, w);
                any_record |= ws.any_record;
                if (ws.any_success) {
                    any_success = true;
                    break;
                }
            }
            if (!any_record) {
                ++agg.unalignable;
                continue;
            }
            ++agg.aligned;
            if (any_success) ++agg.successes;
        }
    }

    for (const auto& id : endpoints_considered) {
        auto& agg = per_endpoint[id];
        if (agg.failures == 0) {
            out.excluded.push_back(id);  // ratio undefined, not 100%
            continue;
        }
        if (agg.aligned > 0) {
            agg.ratio = static_cast<double>(agg.successes) / static_cast<double>(agg.aligned);
        }
        out.per_endpoint.push_back(agg);
    }

    double sum = 0;
    int n = 0;
    for (const auto& e : out.per_endpoint) {
        if (!e.ratio) continue;
        if (!out.min || *e.ratio < *out.min) out.min = *e.ratio;
        if (!out.max || *e.ratio > *out.max) out.max = *e.ratio;
        sum += *e.ratio;
        ++n;
    }
    if (n > 0) out.avg = sum / n;
    return out;
}

GeofactorResult geofactor(const std::map<std::string, double>& mean_latency_by_vantage) {
    GeofactorResult out;
    std::optional<double> lo, hi;
    for (const auto& [vantage, mean] : mean_latency_by_vantage) {
        if (!(mean > 0)) {
            out.excluded.push_back(vantage);
            continue;
        }
        if (!lo || mean < *lo) lo = mean;
        if (!hi || mean > *hi) hi = mean;
        ++out.vantages_used;
    }
    if (out.vantages_used < 2)
        throw std::invalid_argument("geofactor requires >= 2 vantages with data");
    out.value = *hi / *lo;
    return out;
}

std::optional<double> successable_mean_latency(const Series& s) {
    double sum = 0;
    int64_t n = 0;
    for (const auto& r : s.records) {
        if (!is_successable(r)) continue;
        sum += r.latency_ms;
        ++n;
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

std::vector<DailyPoint> resample_daily(const Series& s) {
    std::map<std::string, std::pair<double, int64_t>> days;  // day -> (sum, count)
    for (const auto& r : s.records) {
        if (!is_successable(r)) continue;
        auto& [sum, count] = days[utc_day(r.timestamp_ms)];
        sum += r.latency_ms;
        ++count;
    }
    std::vector<DailyPoint> out;
    out.reserve(days.size());
    for (const auto& [day, agg] : days) {
        out.push_back(DailyPoint{day, agg.first / static_cast<double>(agg.second), agg.second});
    }
    return out;
}

double nearest_rank_percentile(std::vector<double> values, double p) {
    if (values.empty()) throw std::invalid_argument("percentile of empty sample");
    if (p <= 0 || p > 100) throw std::invalid_argument("percentile out of range");
    std::sort(values.begin(), values.end());
    size_t rank = static_cast<size_t>(std::ceil(p / 100.0 * static_cast<double>(values.size())));
    if (rank < 1) rank = 1;
    return values[rank - 1];
}

LatencyStats latency_stats(const Series& s, int histogram_bin_ms) {
    if (histogram_bin_ms < 1) throw std::invalid_argument("histogram_bin_ms must be >= 1");
    LatencyStats out;
    std::vector<double> lat;
    for (const auto& r : s.records) {
        if (is_successable(r)) lat.push_back(r.latency_ms);
    }
    out.count = static_cast<int64_t>(lat.size());
    if (lat.empty()) {
        out.no_data = true;
        return out;
    }
    double sum = 0;
    for (double v : lat) sum += v;
    out.mean = sum / static_cast<double>(lat.size());
    double var = 0;
    for (double v : lat) var += (v - out.mean) * (v - out.mean);
    out.stddev = std::sqrt(var / static_cast<double>(lat.size()));
    out.p50 = nearest_rank_percentile(lat, 50);
    out.p90 = nearest_rank_percentile(lat, 90);
    out.p99 = nearest_rank_percentile(lat, 99);

    std::map<int64_t, int64_t> bins;
    for (double v : lat) {
        int64_t b = static_cast<int64_t>(std::floor(v / histogram_bin_ms)) * histogram_bin_ms;
        ++bins[b];
    }
    for (const auto& [start, count] : bins) out.histogram.push_back(HistogramBin{start, count});
    return out;
}

namespace {

struct KeyStats {
    double p90 = 0;
    double stddev = 0;
};

std::map<SeriesKey, KeyStats> stats_by_key(const std::vector<Series>& run) {
    std::map<SeriesKey, KeyStats> out;
    for (const auto& s : run) {
        LatencyStats st = latency_stats(s);
        if (st.no_data) continue;
        out[s.key] = KeyStats{st.p90, st.stddev};
    }
    return out;
}

std::map<std::string, double> mean_score_by_endpoint(const std::vector<ScanRow>& rows) {
    std::map<std::string, std::pair<double, int64_t>> agg;
    for (const auto& r : rows) {
        auto& [sum, n] = agg[r.endpoint_id];
        sum += r.server_score;
        ++n;
    }
    std::map<std::string, double> out;
    for (const auto& [id, sn] : agg) out[id] = sn.first / static_cast<double>(sn.second);
    return out;
}

}  // namespace

CompareReport compare_runs(const std::vector<Series>& run_a, const std::vector<Series>& run_b,
                           const std::vector<ScanRow>& scans_a,
                           const std::vector<ScanRow>& scans_b) {
    CompareReport out;
    auto a = stats_by_key(run_a);
    auto b = stats_by_key(run_b);

    for (const auto& [key, sa] : a) {
        auto it = b.find(key);
        if (it == b.end()) {
            out.discontinued.push_back(key);
            continue;
        }
        CompareEntry e;
        e.key = key;
        e.p90_a = sa.p90;
        e.p90_b = it->second.p90;
        e.stddev_a = sa.stddev;
        e.stddev_b = it->second.stddev;
        e.p90_rel_change = sa.p90 != 0 ? (e.p90_b - e.p90_a) / e.p90_a : 0.0;
        e.stddev_rel_change = sa.stddev != 0 ? (e.stddev_b - e.stddev_a) / e.stddev_a : 0.0;
        if (e.p90_b > e.p90_a) {
            ++out.p90_increases;
        } else if (e.p90_b < e.p90_a) {
            ++out.p90_decreases;
        } else {
            ++out.p90_flat;
        }
        out.entries.push_back(e);
    }
    for (const auto& [key, _] : b) {
        if (!a.count(key)) out.added.push_back(key);
    }

    auto score_a = mean_score_by_endpoint(scans_a);
    auto score_b = mean_score_by_endpoint(scans_b);
    std::vector<double> abs_changes;
    for (const auto& [id, ma] : score_a) {
        auto it = score_b.find(id);
        if (it == score_b.end()) {
            out.scores_discontinued.push_back(id);
            continue;
        }
        ScoreChange c;
        c.endpoint_id = id;
        c.mean_a = ma;
        c.mean_b = it->second;
        c.rel_change = ma != 0 ? (c.mean_b - c.mean_a) / std::abs(ma) : 0.0;
        abs_changes.push_back(std::abs(c.rel_change));
        out.score_changes.push_back(c);
    }
    for (const auto& [id, _] : score_b) {
        if (!score_a.count(id)) out.scores_added.push_back(id);
    }
    if (!abs_changes.empty()) {
        std::sort(abs_changes.begin(), abs_changes.end());
        size_t n = abs_changes.size();
        out.median_abs_score_change =
            n % 2 == 1 ? abs_changes[n / 2] : (abs_changes[n / 2 - 1] + abs_changes[n / 2]) / 2.0;
    }
    return out;
}

namespace {

// Relative deviation of `value` from `base`; infinite when base is 0 and the
// values differ.
double rel_dev(double value, double base) {
    if (base == 0.0) return value == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::abs(value - base) / std::abs(base);
}

}  // namespace

std::vector<ChangeEvent> lasting_changes(const std::vector<ScorePoint>& series,
                                         double min_rel_change, int persistence) {
    if (min_rel_change <= 0) throw std::invalid_argument("min_rel_change must be > 0");
    if (persistence < 1) throw std::invalid_argument("persistence must be >= 1");

    std::vector<ChangeEvent> out;
    const size_t n = series.size();
    for (size_t i = 1; i < n; ++i) {
        double old_score = series[i - 1].score;
        double new_score = series[i].score;
        bool zero_base = old_score == 0.0;
        bool changed =
            zero_base ? new_score != 0.0 : rel_dev(new_score, old_score) >= min_rel_change;
        if (!changed) continue;
        if (i + static_cast<size_t>(persistence) >= n) continue;  // not enough lookahead
        bool maintained = true;
        for (size_t j = i + 1; j <= i + static_cast<size_t>(persistence); ++j) {
            if (rel_dev(series[j].score, new_score) >= min_rel_change) {
                maintained = false;
                break;
            }
        }
        if (!maintained) continue;
        out.push_back(ChangeEvent{series[i].timestamp_ms, old_score, new_score, zero_base});
    }
    return out;
}

SuiteCensus suite_census(const std::vector<ScanRow>& a, const std::vector<ScanRow>& b,
                         const SuiteTable& table) {
    SuiteCensus out;
    std::set<std::string> names_a, names_b, unknown;

    auto count_weak = [&](const std::vector<ScanRow>& rows, std::set<std::string>& names) {
        int64_t weak = 0;
        for (const auto& row : rows) {
            for (const auto& suite : row.suites) {
                names.insert(suite);
                auto c = table.find(suite);
                if (!c) {
                    unknown.insert(suite);
                    continue;
                }
                if (SuiteTable::score(*c) == -1.0) ++weak;
            }
        }
        return weak;
    };

    out.weak_occurrences_a = count_weak(a, names_a);
    out.weak_occurrences_b = count_weak(b, names_b);

    std::set_difference(names_a.begin(), names_a.end(), names_b.begin(), names_b.end(),
                        std::back_inserter(out.only_in_a));
    std::set_difference(names_b.begin(), names_b.end(), names_a.begin(), names_a.end(),
                        std::back_inserter(out.only_in_b));
    out.unknown_suites.assign(unknown.begin(), unknown.end());
    return out;
}

ScanLoadResult load_scan_rows(const std::vector<std::string>& files) {
    ScanLoadResult out;
    for (const auto& path : files) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open scan log: " + path);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            auto row = decode_scan_row(line);
            if (row) {
                out.rows.push_back(std::move(*row));
            } else {
                ++out.quarantined_lines;
            }
        }
    }
    return out;
}

std::map<std::pair<std::string, std::string>, std::vector<ScorePoint>> score_series(
    const std::vector<ScanRow>& rows) {
    std::map<std::pair<std::string, std::string>, std::vector<ScorePoint>> out;
    for (const auto& r : rows) {
        out[{r.endpoint_id, r.vantage}].push_back(ScorePoint{r.timestamp_ms, r.server_score});
    }
    for (auto& [_, pts] : out) {
        std::stable_sort(pts.begin(), pts.end(), [](const ScorePoint& a, const ScorePoint& b) {
            return a.timestamp_ms < b.timestamp_ms;
        });
    }
    return out;
}

}  // namespace apiq

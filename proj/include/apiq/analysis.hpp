// Copyright the apiq authors.
//
// Licensed under the terms of the Apache 2.0 open source license.
// Please refer to the LICENSE file in the project root for the terms.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "apiq/records.hpp"
#include "apiq/suite_table.hpp"

namespace apiq {

struct SeriesKey {
    std::string endpoint_id;
    Protocol protocol = Protocol::Http;
    std::string vantage;

    auto operator<=>(const SeriesKey&) const = default;
    std::string str() const;
};

/// Interval with missing records (collector failure, not unavailability).
struct Gap {
    int64_t start_ms = 0;  // timestamp of the last record before the hole
    int64_t end_ms = 0;    // timestamp of the first record after it
};

struct Series {
    SeriesKey key;
    std::vector<ProbeRecord> records;  // strictly increasing timestamps
    std::vector<Gap> gaps;
};

struct LoadResult {
    std::vector<Series> series;  // sorted by key
    int64_t quarantined_lines = 0;
    int64_t duplicate_records = 0;
    int64_t files_read = 0;
};

/// Partitions log files into per-(endpoint, protocol, vantage) series, sorts
/// by timestamp, detects gaps where spacing exceeds gap_threshold * interval.
/// Malformed lines are quarantined (counted), never fatal. Unreadable files
/// throw.
LoadResult load_series(const std::vector<std::string>& files, int expected_interval_s,
                       double gap_threshold = 2.0);

/// Same partition/gap logic over already-decoded records (for tests and
/// in-memory pipelines).
LoadResult build_series(std::vector<ProbeRecord> records, int expected_interval_s,
                        double gap_threshold = 2.0);

struct AvailabilityReport {
    bool no_data = false;
    int64_t records = 0;

    // ICMP
    int64_t packets_sent = 0;
    int64_t packets_lost = 0;
    std::optional<double> pingability;  // 1 - lost/sent

    // HTTP(S)
    int64_t status_responses = 0;  // records carrying any status code
    int64_t successes = 0;         // 2xx/3xx
    int64_t failures = 0;          // records that are not successes
    int64_t failures_4xx = 0;
    int64_t failures_5xx = 0;
    int64_t failures_none = 0;  // no status at all
    std::optional<double> accessibility;
    std::optional<double> successability;
    std::optional<double> frac_4xx, frac_5xx, frac_none;  // over failures, when any
};

/// Availability aggregates over one series. Gap intervals contribute to no
/// denominator: only records that exist are counted.
AvailabilityReport availability(const Series& s);

enum class Strategy { RegionChange, HttpToHttps, HttpsToHttp };

const char* to_string(Strategy s);

struct EndpointFailover {
    std::string endpoint_id;
    int64_t failures = 0;      // non-successable records considered
    int64_t aligned = 0;       // failures with >= 1 counterpart record in window
    int64_t successes = 0;     // aligned failures rescued by the strategy
    int64_t unalignable = 0;   // failures with no counterpart record in window
    std::optional<double> ratio;  // successes / aligned; nullopt when aligned == 0
};

struct StrategyOutcome {
    Strategy strategy = Strategy::RegionChange;
    std::vector<EndpointFailover> per_endpoint;  // sorted by endpoint id
    std::optional<double> min, max, avg;         // over endpoints with a defined ratio
    std::vector<std::string> excluded;           // endpoints with zero failures (ratio undefined)
};

/// For each failed (non-successable) record, the strategy succeeds if a
/// successable record exists in a counterpart series within the alignment
/// window. REGION_CHANGE: same endpoint+protocol, any other vantage.
/// HTTP_2_HTTPS / HTTPS_2_HTTP: same endpoint+vantage, other protocol.
StrategyOutcome failover_ratios(const std::vector<Series>& all, Strategy strategy,
                                int alignment_window_s = 150);

struct GeofactorResult {
    double value = 1.0;  // max mean / min mean
    int vantages_used = 0;
    std::vector<std::string> excluded;  // vantages with no data
};

/// max/min of per-vantage mean latencies. Throws std::invalid_argument when
/// fewer than two usable vantages remain.
GeofactorResult geofactor(const std::map<std::string, double>& mean_latency_by_vantage);

/// Mean latency over successable records; nullopt when the series has none.
std::optional<double> successable_mean_latency(const Series& s);

struct DailyPoint {
    std::string day;  // "YYYY-MM-DD" (UTC)
    double mean_ms = 0.0;
    int64_t count = 0;
};

/// Arithmetic mean latency per UTC day over successable records. Days with no
/// records are absent, never zero.
std::vector<DailyPoint> resample_daily(const Series& s);

struct HistogramBin {
    int64_t bin_start_ms = 0;
    int64_t count = 0;
};

struct LatencyStats {
    bool no_data = false;
    int64_t count = 0;
    double mean = 0.0;
    double stddev = 0.0;  // population
    double p50 = 0.0, p90 = 0.0, p99 = 0.0;  // nearest-rank
    std::vector<HistogramBin> histogram;
};

/// Latency aggregates over successable records only. Percentiles use the
/// nearest-rank method: value at index ceil(p/100 * n) of the sorted sample.
LatencyStats latency_stats(const Series& s, int histogram_bin_ms = 50);

/// Nearest-rank percentile of an unsorted sample; p in (0, 100].
double nearest_rank_percentile(std::vector<double> values, double p);

struct CompareEntry {
    SeriesKey key;
    double p90_a = 0, p90_b = 0;
    double stddev_a = 0, stddev_b = 0;
    double p90_rel_change = 0;     // (b - a) / a
    double stddev_rel_change = 0;  // (b - a) / a; 0 baseline handled by caller display
};

struct ScoreChange {
    std::string endpoint_id;
    double mean_a = 0, mean_b = 0;
    double rel_change = 0;  // (b - a) / |a|
};

struct CompareReport {
    std::vector<CompareEntry> entries;  // keys present in both runs
    int p90_increases = 0, p90_decreases = 0, p90_flat = 0;
    std::vector<SeriesKey> discontinued;  // probe series only in run A
    std::vector<SeriesKey> added;         // probe series only in run B
    std::vector<ScoreChange> score_changes;
    std::optional<double> median_abs_score_change;
    std::vector<std::string> scores_discontinued;  // endpoints with scans only in A
    std::vector<std::string> scores_added;
};

/// Per-key p90/stddev deltas across two runs plus server-score change medians.
CompareReport compare_runs(const std::vector<Series>& run_a, const std::vector<Series>& run_b,
                           const std::vector<ScanRow>& scans_a,
                           const std::vector<ScanRow>& scans_b);

struct ScorePoint {
    int64_t timestamp_ms = 0;
    double score = 0.0;
};

struct ChangeEvent {
    int64_t timestamp_ms = 0;
    double old_score = 0.0;
    double new_score = 0.0;
    bool zero_base = false;  // relative change undefined (old == 0); flagged
};

/// Lasting-change detection over a time-ordered score series: a change of at
/// least min_rel_change (relative to the previous score) that every one of the
/// `persistence` following scores stays within min_rel_change of.
std::vector<ChangeEvent> lasting_changes(const std::vector<ScorePoint>& series,
                                         double min_rel_change = 0.01, int persistence = 10);

struct SuiteCensus {
    std::vector<std::string> only_in_a;
    std::vector<std::string> only_in_b;
    int64_t weak_occurrences_a = 0;  // (scan, suite) pairs scoring exactly -1
    int64_t weak_occurrences_b = 0;
    std::vector<std::string> unknown_suites;  // seen in scans but absent from the table
};

/// Set difference of suite names across two scan-log sets plus counts of
/// weak-suite occurrences per run.
SuiteCensus suite_census(const std::vector<ScanRow>& a, const std::vector<ScanRow>& b,
                         const SuiteTable& table);

struct ScanLoadResult {
    std::vector<ScanRow> rows;
    int64_t quarantined_lines = 0;
};

/// Reads scan logs; '#' lines are runner diagnostics and are skipped.
ScanLoadResult load_scan_rows(const std::vector<std::string>& files);

/// Score series per (endpoint, vantage), time-ordered, from scan rows.
std::map<std::pair<std::string, std::string>, std::vector<ScorePoint>> score_series(
    const std::vector<ScanRow>& rows);

}  // namespace apiq

// Copyright the apiq authors.
//
// Licensed under the terms of the Apache 2.0 open source license.
// Please refer to the LICENSE file in the project root for the terms.

#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace apiq {

enum class Protocol { Icmp, Http, Https };

const char* to_string(Protocol p);
std::optional<Protocol> protocol_from_string(std::string_view s);

/// Outcome taxonomy for a single measurement. SUCCESS covers 2xx/3xx
/// responses; CLIENT_ERROR 4xx; SERVER_ERROR 5xx. The remaining classes
/// carry no status code: the request died before one arrived.
enum class OutcomeClass {
    Success,
    ClientError,
    ServerError,
    NoResponse,
    DnsFailure,
    ConnectFailure,
    TlsFailure,
};

const char* to_string(OutcomeClass c);
std::optional<OutcomeClass> outcome_class_from_string(std::string_view s);

/// True for classes that may carry a status code.
bool outcome_has_status(OutcomeClass c);

struct ProbeOutcome {
    OutcomeClass cls = OutcomeClass::NoResponse;
    std::optional<int> status_code;  // present iff cls is Success/ClientError/ServerError
    std::string detail;
};

/// One benchmark target. `url` is scheme-less: "host[:port]/path".
struct EndpointSpec {
    std::string id;
    std::string url;
    std::set<Protocol> protocols;
};

struct EndpointAddress {
    std::string host;
    int port = 0;  // 0 = scheme default (80/443); unused for ICMP
    std::string path = "/";
};

/// Parses a scheme-less URL into host/port/path. Rejects embedded schemes.
std::optional<EndpointAddress> parse_endpoint_url(std::string_view url);

/// Validates a single spec: non-empty id, non-empty protocol set, parseable url.
/// Returns an error message, or nullopt when valid.
std::optional<std::string> validate_endpoint(const EndpointSpec& ep);

struct ProbeRecord {
    int64_t timestamp_ms = 0;  // wall clock, UTC
    std::string vantage;
    std::string endpoint_id;
    Protocol protocol = Protocol::Http;
    double latency_ms = 0.0;  // start of request to end of response body
    ProbeOutcome outcome;
    uint64_t bytes = 0;     // response body size; 0 for ICMP
    int packets_sent = 0;   // ICMP only
    int packets_lost = 0;   // ICMP only
};

/// Record log line format (the runner/analysis interchange contract):
///   timestamp_ms|vantage|endpoint_id|protocol|latency_ms|outcome_class|
///   status_code|bytes|packets_sent|packets_lost|detail
/// Absent fields are empty strings. No trailing newline.
std::string encode_probe_record(const ProbeRecord& r);

/// Strict decode; any malformed field yields nullopt (callers quarantine).
std::optional<ProbeRecord> decode_probe_record(std::string_view line);

struct CipherSuiteInfo {
    std::string name;
    double score = 0.0;  // per-suite security score
};

struct CipherScanRecord {
    int64_t timestamp_ms = 0;
    std::string vantage;
    std::string endpoint_id;
    std::vector<CipherSuiteInfo> suites;  // rank 1 first (server's most preferred)
    double server_score = 0.0;
};

/// Scan log line format:
///   timestamp_ms|vantage|endpoint_id|server_score|suite1;suite2;...
std::string encode_scan_record(const CipherScanRecord& r);

/// Decoded scan line; suite scores are not stored in the log and must be
/// recomputed from the classification table when needed.
struct ScanRow {
    int64_t timestamp_ms = 0;
    std::string vantage;
    std::string endpoint_id;
    double server_score = 0.0;
    std::vector<std::string> suites;
};

std::optional<ScanRow> decode_scan_row(std::string_view line);

}  // namespace apiq

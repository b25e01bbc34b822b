// Copyright the apiq authors.
//
// Licensed under the terms of the Apache 2.0 open source license.
// Please refer to the LICENSE file in the project root for the terms.

#include "apiq/records.hpp"

#include "apiq/util.hpp"

namespace apiq {

const char* to_string(Protocol p) {
    switch (p) {
        case Protocol::Icmp: return "ICMP";
        case Protocol::Http: return "HTTP";
        case Protocol::Https: return "HTTPS";
    }
    return "?";
}

std::optional<Protocol> protocol_from_string(std::string_view s) {
    if (s == "ICMP") return Protocol::Icmp;
    if (s == "HTTP") return Protocol::Http;
    if (s == "HTTPS") return Protocol::Https;
    return std::nullopt;
}

const char* to_string(OutcomeClass c) {
    switch (c) {
        case OutcomeClass::Success: return "SUCCESS";
        case OutcomeClass::ClientError: return "CLIENT_ERROR";
        case OutcomeClass::ServerError: return "SERVER_ERROR";
        case OutcomeClass::NoResponse: return "NO_RESPONSE";
        case OutcomeClass::DnsFailure: return "DNS_FAILURE";
        case OutcomeClass::ConnectFailure: return "CONNECT_FAILURE";
        case OutcomeClass::TlsFailure: return "TLS_FAILURE";
    }
    return "?";
}

std::optional<OutcomeClass> outcome_class_from_string(std::string_view s) {
    if (s == "SUCCESS") return OutcomeClass::Success;
    if (s == "CLIENT_ERROR") return OutcomeClass::ClientError;
    if (s == "SERVER_ERROR") return OutcomeClass::ServerError;
    if (s == "NO_RESPONSE") return OutcomeClass::NoResponse;
    if (s == "DNS_FAILURE") return OutcomeClass::DnsFailure;
    if (s == "CONNECT_FAILURE") return OutcomeClass::ConnectFailure;
    if (s == "TLS_FAILURE") return OutcomeClass::TlsFailure;
    return std::nullopt;
}

bool outcome_has_status(OutcomeClass c) {
    return c == OutcomeClass::Success || c == OutcomeClass::ClientError ||
           c == OutcomeClass::ServerError;
}

std::optional<EndpointAddress> parse_endpoint_url(std::string_view url) {
    if (url.empty()) return std::nullopt;
    if (url.find("://") != std::string_view::npos) return std::nullopt;  // no embedded scheme
    EndpointAddress addr;
    size_t slash = url.find('/');
    std::string_view hostport = url.substr(0, slash);
    addr.path = slash == std::string_view::npos ? "/" : std::string(url.substr(slash));
    size_t colon = hostport.rfind(':');
    if (colon != std::string_view::npos) {
        auto port = parse_i64(hostport.substr(colon + 1));
        if (!port || *port < 1 || *port > 65535) return std::nullopt;
        addr.port = static_cast<int>(*port);
        hostport = hostport.substr(0, colon);
    }
    if (hostport.empty()) return std::nullopt;
    addr.host = std::string(hostport);
    return addr;
}

std::optional<std::string> validate_endpoint(const EndpointSpec& ep) {
    if (ep.id.empty()) return "endpoint id is empty";
    if (ep.id.find_first_of(" |\t") != std::string::npos)
        return "endpoint id '" + ep.id + "' contains separator characters";
    if (ep.protocols.empty()) return "endpoint '" + ep.id + "' has no protocols";
    if (!parse_endpoint_url(ep.url))
        return "endpoint '" + ep.id + "' has unparseable url '" + ep.url + "'";
    return std::nullopt;
}

std::string encode_probe_record(const ProbeRecord& r) {
    std::string line;
    line.reserve(128);
    line += std::to_string(r.timestamp_ms);
    line += '|';
    line += sanitize_field(r.vantage);
    line += '|';
    line += sanitize_field(r.endpoint_id);
    line += '|';
    line += to_string(r.protocol);
    line += '|';
    line += format_fixed(r.latency_ms, 3);
    line += '|';
    line += to_string(r.outcome.cls);
    line += '|';
    if (r.outcome.status_code) line += std::to_string(*r.outcome.status_code);
    line += '|';
    line += std::to_string(r.bytes);
    line += '|';
    if (r.protocol == Protocol::Icmp) line += std::to_string(r.packets_sent);
    line += '|';
    if (r.protocol == Protocol::Icmp) line += std::to_string(r.packets_lost);
    line += '|';
    line += sanitize_field(r.outcome.detail);
    return line;
}

std::optional<ProbeRecord> decode_probe_record(std::string_view line) {
    auto f = split(line, '|');
    if (f.size() != 11) return std::nullopt;

    ProbeRecord r;
    auto ts = parse_i64(f[0]);
    if (!ts) return std::nullopt;
    r.timestamp_ms = *ts;
    r.vantage = f[1];
    r.endpoint_id = f[2];
    if (r.vantage.empty() || r.endpoint_id.empty()) return std::nullopt;
    auto proto = protocol_from_string(f[3]);
    if (!proto) return std::nullopt;
    r.protocol = *proto;
    auto lat = parse_double(f[4]);
    if (!lat || *lat < 0) return std::nullopt;
    r.latency_ms = *lat;
    auto cls = outcome_class_from_string(f[5]);
    if (!cls) return std::nullopt;
    r.outcome.cls = *cls;
    if (!f[6].empty()) {
        auto sc = parse_i64(f[6]);
        if (!sc || *sc < 100 || *sc > 599) return std::nullopt;
        r.outcome.status_code = static_cast<int>(*sc);
    }
    // Class/status consistency is part of the format, not advisory.
    if (outcome_has_status(r.outcome.cls) != r.outcome.status_code.has_value()) return std::nullopt;
    if (r.outcome.status_code) {
        int sc = *r.outcome.status_code;
        bool ok = (r.outcome.cls == OutcomeClass::Success && sc >= 200 && sc <= 399) ||
                  (r.outcome.cls == OutcomeClass::ClientError && sc >= 400 && sc <= 499) ||
                  (r.outcome.cls == OutcomeClass::ServerError && sc >= 500 && sc <= 599);
        if (!ok) return std::nullopt;
    }
    auto bytes = parse_i64(f[7]);
    if (!bytes || *bytes < 0) return std::nullopt;
    r.bytes = static_cast<uint64_t>(*bytes);
    if (r.protocol == Protocol::Icmp) {
        auto sent = parse_i64(f[8]);
        auto lost = parse_i64(f[9]);
        if (!sent || !lost || *sent < 0 || *lost < 0 || *lost > *sent) return std::nullopt;
        r.packets_sent = static_cast<int>(*sent);
        r.packets_lost = static_cast<int>(*lost);
    } else {
        if (!f[8].empty() || !f[9].empty()) return std::nullopt;
    }
    r.outcome.detail = f[10];
    return r;
}

std::string encode_scan_record(const CipherScanRecord& r) {
    std::string line;
    line += std::to_string(r.timestamp_ms);
    line += '|';
    line += sanitize_field(r.vantage);
    line += '|';
    line += sanitize_field(r.endpoint_id);
    line += '|';
    line += format_fixed(r.server_score, 6);
    line += '|';
    for (size_t i = 0; i < r.suites.size(); ++i) {
        if (i) line += ';';
        line += sanitize_field(r.suites[i].name);
    }
    return line;
}

std::optional<ScanRow> decode_scan_row(std::string_view line) {
    auto f = split(line, '|');
    if (f.size() != 5) return std::nullopt;
    ScanRow row;
    auto ts = parse_i64(f[0]);
    if (!ts) return std::nullopt;
    row.timestamp_ms = *ts;
    row.vantage = f[1];
    row.endpoint_id = f[2];
    if (row.vantage.empty() || row.endpoint_id.empty()) return std::nullopt;
    auto score = parse_double(f[3]);
    if (!score) return std::nullopt;
    row.server_score = *score;
    if (f[4].empty()) return std::nullopt;  // a scored record always lists suites
    row.suites = split(f[4], ';');
    for (const auto& s : row.suites) {
        if (s.empty()) return std::nullopt;
    }
    return row;
}

}  // namespace apiq

// Copyright the apiq authors.
//
// Licensed under the terms of the Apache 2.0 open source license.
// Please refer to the LICENSE file in the project root for the terms.

#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "apiq/records.hpp"

namespace apiq {

enum class KeyExchange { Ecdhe, Dhe, StaticRsa, Other };

const char* to_string(KeyExchange kx);

/// Parsed components of one cipher suite, as shipped in the classification
/// data file (one suite per line: name,key_exchange,cipher_bits,cipher_family,mac).
struct SuiteComponents {
    std::string name;
    KeyExchange key_exchange = KeyExchange::Other;
    int cipher_bits = 0;
    std::string cipher_family;  // AES, AESGCM, CAMELLIA, CHACHA20, RC4, 3DES, DES, NULL, ...
    std::string mac;            // SHA, SHA256, SHA384, MD5, AEAD
};

class UnknownSuiteError : public std::runtime_error {
public:
    explicit UnknownSuiteError(std::string suite)
        : std::runtime_error("unknown cipher suite: " + suite), suite_(std::move(suite)) {}
    const std::string& suite() const { return suite_; }

private:
    std::string suite_;
};

class SuiteTableError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Suite-name -> components lookup plus the per-suite scoring rule.
///
/// Score = baseScore + keyLengthModifier where
///   baseScore      -1  known-weak algorithm in use (RC4, DES, 3DES, RC2, IDEA,
///                      EXPORT grade, NULL encryption, or MD5 as MAC)
///                   0  no perfect forward secrecy (static key exchange)
///                   1  ephemeral key exchange (ECDHE/DHE) and nothing weak
///   keyLengthModifier  +0.1 when the bulk cipher strength is >= 256 bit.
/// The modifier applies uniformly, including to weak suites.
class SuiteTable {
public:
    static SuiteTable load_file(const std::string& path);
    static SuiteTable parse(std::string_view text, const std::string& origin = "<memory>");

    std::optional<SuiteComponents> find(std::string_view name) const;

    /// Per-suite security score; throws UnknownSuiteError for names not in
    /// the table (a suite is never silently scored 0).
    double score(std::string_view name) const;

    static double score(const SuiteComponents& c);

    size_t size() const { return suites_.size(); }
    std::vector<std::string> names() const;

private:
    std::map<std::string, SuiteComponents, std::less<>> suites_;
};

/// Server security score: sum of suite scores weighted by 1/rank, rank 1 being
/// the server's most preferred suite. Throws std::invalid_argument on an empty
/// list (zero discovered suites is a scan failure upstream, not a score of 0).
double score_server(const std::vector<double>& suite_scores);
double score_server(const std::vector<CipherSuiteInfo>& suites);

}  // namespace apiq

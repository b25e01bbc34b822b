// Copyright the apiq authors.
//
// Licensed under the terms of the Apache 2.0 open source license.
// Please refer to the LICENSE file in the project root for the terms.

#include "apiq/suite_table.hpp"

#include <fstream>
#include <sstream>

#include "apiq/util.hpp"

namespace apiq {

const char* to_string(KeyExchange kx) {
    switch (kx) {
        case KeyExchange::Ecdhe: return "ECDHE";
        case KeyExchange::Dhe: return "DHE";
        case KeyExchange::StaticRsa: return "STATIC_RSA";
        case KeyExchange::Other: return "OTHER";
    }
    return "?";
}

static std::optional<KeyExchange> kx_from_string(std::string_view s) {
    if (s == "ECDHE") return KeyExchange::Ecdhe;
    if (s == "DHE") return KeyExchange::Dhe;
    if (s == "STATIC_RSA") return KeyExchange::StaticRsa;
    if (s == "OTHER") return KeyExchange::Other;
    return std::nullopt;
}

SuiteTable SuiteTable::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SuiteTableError("cannot open suite table: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

SuiteTable SuiteTable::parse(std::string_view text, const std::string& origin) {
    SuiteTable table;
    int lineno = 0;
    for (const auto& raw : split(text, '\n')) {
        ++lineno;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        auto f = split(line, ',');
        auto fail = [&](const std::string& what) {
            throw SuiteTableError(origin + ":" + std::to_string(lineno) + ": " + what);
        };
        if (f.size() != 5) fail("expected 5 fields, got " + std::to_string(f.size()));
        SuiteComponents c;
        c.name = trim(f[0]);
        if (c.name.empty()) fail("empty suite name");
        auto kx = kx_from_string(trim(f[1]));
        if (!kx) fail("bad key_exchange '" + f[1] + "'");
        c.key_exchange = *kx;
        auto bits = parse_i64(trim(f[2]));
        if (!bits || *bits < 0) fail("bad cipher_bits '" + f[2] + "'");
        c.cipher_bits = static_cast<int>(*bits);
        c.cipher_family = trim(f[3]);
        c.mac = trim(f[4]);
        if (c.cipher_family.empty() || c.mac.empty()) fail("empty cipher_family/mac");
        if (table.suites_.count(c.name)) fail("duplicate suite '" + c.name + "'");
        table.suites_.emplace(c.name, std::move(c));
    }
    return table;
}

std::optional<SuiteComponents> SuiteTable::find(std::string_view name) const {
    auto it = suites_.find(name);
    if (it == suites_.end()) return std::nullopt;
    return it->second;
}

static bool weak_family(std::string_view family) {
    return family == "RC4" || family == "DES" || family == "3DES" || family == "RC2" ||
           family == "IDEA" || family == "EXPORT" || family == "NULL";
}

double SuiteTable::score(const SuiteComponents& c) {
    bool weak = weak_family(c.cipher_family) || c.mac == "MD5";
    double base;
    if (weak) {
        base = -1.0;
    } else if (c.key_exchange == KeyExchange::Ecdhe || c.key_exchange == KeyExchange::Dhe) {
        base = 1.0;
    } else {
        base = 0.0;
    }
    double modifier = c.cipher_bits >= 256 ? 0.1 : 0.0;
    return base + modifier;
}

double SuiteTable::score(std::string_view name) const {
    auto c = find(name);
    if (!c) throw UnknownSuiteError(std::string(name));
    return score(*c);
}

std::vector<std::string> SuiteTable::names() const {
    std::vector<std::string> out;
    out.reserve(suites_.size());
    for (const auto& [name, _] : suites_) out.push_back(name);
    return out;
}

double score_server(const std::vector<double>& suite_scores) {
    if (suite_scores.empty())
        throw std::invalid_argument("score_server: empty suite list (scan failure upstream)");
    double sum = 0.0;
    for (size_t i = 0; i < suite_scores.size(); ++i) {
        sum += suite_scores[i] / static_cast<double>(i + 1);
    }
    return sum;
}

double score_server(const std::vector<CipherSuiteInfo>& suites) {
    std::vector<double> scores;
    scores.reserve(suites.size());
    for (const auto& s : suites) scores.push_back(s.score);
    return score_server(scores);
}

}  // namespace apiq

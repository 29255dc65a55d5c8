#pragma once

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "schlumprecht/analysis.hpp"
#include "schlumprecht/norm.hpp"
#include "schlumprecht/sparse_vector.hpp"

namespace schlumprecht {

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline SparseVector entries_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw parse_error("vector JSON must be an array of [index, value] pairs");
    std::vector<SparseVector::Entry> entries;
    for (const auto& pair : j) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() ||
            !pair[1].is_number()) {
            throw parse_error("vector JSON entries must be [integer index, numeric value]");
        }
        entries.push_back({pair[0].get<index_t>(), pair[1].get<double>()});
    }
    return SparseVector::from_pairs(std::move(entries));
}

}  // namespace detail

// "index:value" lines, or a JSON array of [index, value] pairs; the leading
// character decides.
inline SparseVector parse_vector(const std::string& text) {
    const std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    if (text[first] == '[') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw parse_error(std::string("vector JSON: ") + e.what());
        }
        return detail::entries_from_json(j);
    }
    std::vector<SparseVector::Entry> entries;
    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = detail::trim(raw);
        if (line.empty() || line[0] == '#') continue;
        const std::size_t colon = line.find(':');
        if (colon == std::string::npos) {
            throw parse_error("line " + std::to_string(lineno) + ": expected index:value");
        }
        const std::string idx = detail::trim(line.substr(0, colon));
        const std::string val = detail::trim(line.substr(colon + 1));
        char* end = nullptr;
        const long long i = std::strtoll(idx.c_str(), &end, 10);
        if (idx.empty() || *end != '\0') {
            throw parse_error("line " + std::to_string(lineno) + ": bad index '" + idx + "'");
        }
        const double v = std::strtod(val.c_str(), &end);
        if (val.empty() || *end != '\0') {
            throw parse_error("line " + std::to_string(lineno) + ": bad value '" + val + "'");
        }
        entries.push_back({i, v});
    }
    return SparseVector::from_pairs(std::move(entries));
}

inline SparseVector load_vector(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_vector(buf.str());
}

inline std::string vector_to_text(const SparseVector& x) {
    std::string out;
    char buf[64];
    for (const auto& e : x.entries()) {
        std::snprintf(buf, sizeof(buf), "%lld:%.17g\n", static_cast<long long>(e.index), e.value);
        out += buf;
    }
    return out;
}

inline nlohmann::json vector_to_json(const SparseVector& x) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& e : x.entries()) j.push_back({e.index, e.value});
    return j;
}

// Write-to-temp then rename: readers never see a partial file.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline nlohmann::json certificate_to_json(const PartitionTree& t) {
    nlohmann::json j;
    switch (t.kind) {
        case PartitionTree::Kind::empty:
            j["kind"] = "empty";
            return j;
        case PartitionTree::Kind::leaf:
            j["kind"] = "leaf";
            break;
        case PartitionTree::Kind::sup:
            j["kind"] = "sup";
            break;
        case PartitionTree::Kind::split:
            j["kind"] = "split";
            break;
    }
    j["range"] = {t.range.lo, t.range.hi};
    if (t.kind == PartitionTree::Kind::split) {
        nlohmann::json kids = nlohmann::json::array();
        for (const PartitionTree& c : t.children) kids.push_back(certificate_to_json(c));
        j["children"] = std::move(kids);
    }
    return j;
}

inline nlohmann::json report_to_json(const CheckReport& rep) {
    nlohmann::json items = nlohmann::json::array();
    for (const CheckItem& it : rep.items) {
        items.push_back({{"k", it.k},
                         {"label", it.label},
                         {"measured", it.measured},
                         {"bound", it.bound},
                         {"pass", it.pass}});
    }
    return {{"name", rep.name}, {"pass", rep.pass}, {"items", std::move(items)},
            {"notes", rep.notes}};
}

inline std::string report_to_csv(const CheckReport& rep) {
    std::string out = "k,label,measured,bound,pass\n";
    char buf[128];
    for (const CheckItem& it : rep.items) {
        std::snprintf(buf, sizeof(buf), "%lld,\"%s\",%.17g,%.17g,%s\n",
                      static_cast<long long>(it.k), it.label.c_str(), it.measured, it.bound,
                      it.pass ? "true" : "false");
        out += buf;
    }
    return out;
}

inline std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// The body is deterministic for a fixed config; only the timestamp varies.
inline nlohmann::json wrap_report(nlohmann::json body) {
    return {{"generated_at", utc_timestamp()}, {"report", std::move(body)}};
}

}  // namespace schlumprecht

#pragma once

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <unordered_map>

#include "schlumprecht/sparse_vector.hpp"

namespace schlumprecht {

// Process-wide memo of norm values keyed by the run-length-encoded canonical
// form. Safe for concurrent lookup/store; entries are only ever values the
// engine computed, so a hit is observationally identical to recomputation.
//
// File format (version 1): a header line, then one record per line
//   "<count>x<hexfloat>[,...] <hexfloat-norm>".
// A cache that fails to parse is discarded wholesale, never partially trusted.
class NormCache {
public:
    static constexpr const char* file_header = "schlumprecht-norm-cache 1";

    static std::string rle_key(const CanonicalForm& c) {
        std::string key;
        char buf[48];
        std::size_t i = 0;
        while (i < c.values.size()) {
            std::size_t j = i;
            while (j < c.values.size() && c.values[j] == c.values[i]) ++j;
            if (!key.empty()) key.push_back(',');
            std::snprintf(buf, sizeof(buf), "%zux%a", j - i, c.values[i]);
            key += buf;
            i = j;
        }
        return key;
    }

    std::optional<double> lookup(const std::string& key) const {
        std::shared_lock lock(mu_);
        auto it = map_.find(key);
        if (it == map_.end()) return std::nullopt;
        return it->second;
    }

    void store(const std::string& key, double value) {
        std::unique_lock lock(mu_);
        map_.emplace(key, value);
    }

    std::size_t size() const {
        std::shared_lock lock(mu_);
        return map_.size();
    }

    // Replaces the in-memory contents. Returns false (and stays empty) when
    // the file is absent or corrupt.
    bool load_file(const std::filesystem::path& path) {
        std::unique_lock lock(mu_);
        map_.clear();
        std::ifstream in(path);
        if (!in) return false;
        std::string line;
        if (!std::getline(in, line) || line != file_header) return false;
        std::unordered_map<std::string, double> parsed;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto space = line.find(' ');
            if (space == std::string::npos || space == 0) return false;
            const std::string key = line.substr(0, space);
            if (!valid_key(key)) return false;
            char* end = nullptr;
            const double value = std::strtod(line.c_str() + space + 1, &end);
            if (end == line.c_str() + space + 1 || *end != '\0') return false;
            parsed[key] = value;
        }
        map_ = std::move(parsed);
        return true;
    }

    bool save_file(const std::filesystem::path& path) const {
        std::ostringstream out;
        out << file_header << '\n';
        {
            std::shared_lock lock(mu_);
            char buf[40];
            for (const auto& [key, value] : map_) {
                std::snprintf(buf, sizeof(buf), "%a", value);
                out << key << ' ' << buf << '\n';
            }
        }
        const std::filesystem::path tmp = path.string() + ".tmp";
        {
            std::ofstream f(tmp, std::ios::trunc);
            if (!f) return false;
            f << out.str();
            if (!f) return false;
        }
        std::error_code ec;
        std::filesystem::rename(tmp, path, ec);
        return !ec;
    }

private:
    static bool valid_key(const std::string& key) {
        // records look like 3x0x1p+0,1x0x1.8p-1
        std::size_t i = 0;
        while (i < key.size()) {
            std::size_t digits = 0;
            while (i < key.size() && std::isdigit(static_cast<unsigned char>(key[i]))) {
                ++i;
                ++digits;
            }
            if (digits == 0 || i >= key.size() || key[i] != 'x') return false;
            ++i;
            char* end = nullptr;
            std::strtod(key.c_str() + i, &end);
            if (end == key.c_str() + i) return false;
            i = end - key.c_str();
            if (i < key.size()) {
                if (key[i] != ',') return false;
                ++i;
                if (i == key.size()) return false;
            }
        }
        return true;
    }

    mutable std::shared_mutex mu_;
    std::unordered_map<std::string, double> map_;
};

}  // namespace schlumprecht

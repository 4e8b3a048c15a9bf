#pragma once
// File-backed memo for d_S results. One record per line:
//   group-spec|subset-hash|d-value|witness
// with the group spec and witness in the shared JSON vocabulary. Corrupted
// lines are skipped with a warning, never fatal; records whose witness fails
// re-verification against the querying subset are ignored the same way.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dav/json_io.hpp"
#include "dav/zerosum.hpp"

namespace dav {

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string subset_hash(const FabGroup& g, const Subset& s) {
    std::string payload = subset_to_json(g, s).dump();
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(payload)));
    return buf;
}

// Thread-safe under the sweep fan-out: lookups and stores lock a single map
// mutex; inserts are idempotent, so racing writers agree.
class FileDCache final : public DCacheBase {
public:
    FileDCache() : mu_(std::make_unique<std::mutex>()) {}

    // Missing file is an empty cache; malformed lines go to `warn`.
    static FileDCache load(const std::string& path, std::ostream& warn = std::cerr) {
        FileDCache c;
        c.path_ = path;
        std::ifstream in(path);
        if (!in) return c;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            if (!c.parse_line(line)) {
                warn << "cache: skipping corrupt line " << lineno << " of " << path << "\n";
                c.saw_corruption_ = true;
            }
        }
        return c;
    }

    std::optional<SrdResult> lookup(const FabGroup& g, const Subset& s) override {
        std::lock_guard<std::mutex> lock(*mu_);
        auto it = records_.find(key_of(g, s));
        if (it == records_.end()) {
            ++misses_;
            return std::nullopt;
        }
        // decode and re-verify against the querying subset; hash collisions
        // and stale values surface here and fall back to recomputation
        try {
            SrdResult r;
            r.value = it->second.value;
            if (!it->second.witness.is_null() && !it->second.witness.empty()) {
                GSequence w;
                for (const json& e : it->second.witness) w.elems.push_back(element_from_json(g, e));
                std::sort(w.elems.begin(), w.elems.end());
                r.witness = std::move(w);
            }
            detail::verify_srd(g, s, r);
            ++hits_;
            return r;
        } catch (const error&) {
            ++misses_;
            return std::nullopt;
        }
    }

    void store(const FabGroup& g, const Subset& s, const SrdResult& r) override {
        Record rec;
        rec.group = group_to_json(g).dump();
        rec.value = r.value;
        rec.witness = r.witness ? sequence_to_json(g, *r.witness) : json::array();
        std::lock_guard<std::mutex> lock(*mu_);
        records_[key_of(g, s)] = std::move(rec);
        dirty_ = true;
    }

    void save() const {
        if (path_.empty() || !dirty_) return;
        std::ofstream out(path_, std::ios::trunc);
        if (!out) return; // cache is advisory; failure to persist is not fatal
        for (const auto& [key, rec] : records_) {
            const std::string& hash = key.second;
            out << rec.group << "|" << hash << "|" << rec.value << "|" << rec.witness.dump()
                << "\n";
        }
    }

    long long hits() const { return hits_; }
    long long misses() const { return misses_; }
    bool saw_corruption() const { return saw_corruption_; }
    std::size_t size() const { return records_.size(); }

private:
    struct Record {
        std::string group; // canonical group JSON
        int value = 0;
        json witness;
    };

    static std::pair<std::string, std::string> key_of(const FabGroup& g, const Subset& s) {
        return {group_to_json(g).dump(), subset_hash(g, s)};
    }

    bool parse_line(const std::string& line) {
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (parts.size() < 3) {
            std::size_t bar = line.find('|', start);
            if (bar == std::string::npos) return false;
            parts.push_back(line.substr(start, bar - start));
            start = bar + 1;
        }
        parts.push_back(line.substr(start));
        try {
            json gspec = json::parse(parts[0]);
            group_from_json(gspec); // validates
            if (parts[1].size() != 16) return false;
            std::size_t pos = 0;
            int value = std::stoi(parts[2], &pos);
            if (pos != parts[2].size() || value < 0) return false;
            json wit = json::parse(parts[3]);
            if (!wit.is_array()) return false;
            Record rec{gspec.dump(), value, wit};
            records_[{rec.group, parts[1]}] = std::move(rec);
            return true;
        } catch (...) {
            return false;
        }
    }

    std::unique_ptr<std::mutex> mu_; // pointer keeps the cache movable
    std::map<std::pair<std::string, std::string>, Record> records_;
    std::string path_;
    long long hits_ = 0;
    long long misses_ = 0;
    bool dirty_ = false;
    bool saw_corruption_ = false;
};

} // namespace dav

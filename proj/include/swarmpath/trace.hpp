#pragma once
// Trace: ordered per-trial event log, one JSON object per line. The
// header embeds the full scenario so a trace is replayable and renderable
// on its own; the final record is the metrics summary.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "swarmpath/errors.hpp"

namespace swarmpath {

/// Pose samples are recorded every this many ticks (plus the final tick).
inline constexpr long kTracePoseStride = 100;

class Trace {
public:
    /// Events arrive in phase order within a tick; they are re-sorted by
    /// robot id before being appended, so the stored log is ordered by
    /// (tick, robot id) with phase order preserved per robot.
    void emit(const nlohmann::json& event) {
        const long t = event.value("t", 0L);
        const int r = event.value("r", -1);
        if (t != buffer_tick_) {
            flush();
            buffer_tick_ = t;
        }
        buffer_.push_back({r, event.dump()});
    }

    const std::vector<std::string>& lines() const {
        flush();
        return lines_;
    }

    /// FNV-1a over every line; used by the determinism checks.
    std::uint64_t hash() const {
        flush();
        std::uint64_t h = 1469598103934665603ull;
        for (const std::string& line : lines_) {
            for (unsigned char c : line) {
                h ^= c;
                h *= 1099511628211ull;
            }
            h ^= '\n';
            h *= 1099511628211ull;
        }
        return h;
    }

    void write(std::ostream& os) const {
        flush();
        for (const std::string& line : lines_) os << line << '\n';
    }

    void write_file(const std::string& path) const {
        std::ofstream os(path, std::ios::binary);
        if (!os) throw ParseError("cannot open trace output '" + path + "'");
        write(os);
    }

private:
    void flush() const {
        std::stable_sort(buffer_.begin(), buffer_.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        for (auto& [r, line] : buffer_) lines_.push_back(std::move(line));
        buffer_.clear();
    }

    mutable std::vector<std::string> lines_;
    mutable std::vector<std::pair<int, std::string>> buffer_;
    long buffer_tick_ = -2;
};

/// Parse a trace file back into its event objects.
inline std::vector<nlohmann::json> read_trace(std::istream& is) {
    std::vector<nlohmann::json> events;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        try {
            events.push_back(nlohmann::json::parse(line));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("bad trace line: ") + e.what());
        }
    }
    return events;
}

inline std::vector<nlohmann::json> read_trace_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ParseError("cannot open trace '" + path + "'");
    return read_trace(is);
}

}  // namespace swarmpath

#pragma once

// JSON run reports. Keys serialize in lexicographic order (nlohmann's
// default object backing), which keeps the output diff-stable; timestamps
// and wall time are emitted only when requested so that fixed-seed runs
// are byte-identical.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <ostream>
#include <string>
#include <string_view>

#include "json.hpp"

namespace stso {

inline std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

inline std::string spec_digest(const nlohmann::json& spec) {
    return "fnv1a:" + hex64(fnv1a64(spec.dump()));
}

inline std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

enum class CheckStatus { Pass, Fail, Inconclusive };

inline const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        case CheckStatus::Inconclusive: return "inconclusive";
    }
    return "?";
}

class RunReport {
public:
    RunReport(std::string command, bool with_timing)
        : with_timing_(with_timing), start_(std::chrono::steady_clock::now()) {
        doc_["checks"] = nlohmann::json::array();
        doc_["command"] = std::move(command);
        if (with_timing_) doc_["generated_at"] = utc_timestamp();
    }

    void attach_spec(const std::string& model_name, const nlohmann::json& spec) {
        doc_["model"] = model_name;
        doc_["spec_digest"] = spec_digest(spec);
    }

    nlohmann::json& add_check(const std::string& name, CheckStatus status) {
        note_status(status);
        nlohmann::json entry;
        entry["check"] = name;
        entry["status"] = to_string(status);
        doc_["checks"].push_back(std::move(entry));
        return doc_["checks"].back();
    }

    void add_error(const std::string& name, const std::string& message, CheckStatus status) {
        add_check(name, status)["error"] = message;
    }

    nlohmann::json& doc() { return doc_; }

    std::string status() const {
        if (any_fail_) return "fail";
        if (any_inconclusive_) return "inconclusive";
        return "pass";
    }

    // Writes the finished document and returns the matching process exit code.
    int emit(std::ostream& out) {
        doc_["status"] = status();
        if (with_timing_) {
            const auto elapsed = std::chrono::steady_clock::now() - start_;
            doc_["wall_time_ms"] =
                std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
        }
        out << doc_.dump(2) << "\n";
        if (any_fail_) return 1;
        if (any_inconclusive_) return 2;
        return 0;
    }

private:
    void note_status(CheckStatus s) {
        if (s == CheckStatus::Fail) any_fail_ = true;
        if (s == CheckStatus::Inconclusive) any_inconclusive_ = true;
    }

    nlohmann::json doc_;
    bool with_timing_;
    bool any_fail_ = false;
    bool any_inconclusive_ = false;
    std::chrono::steady_clock::time_point start_;
};

}  // namespace stso

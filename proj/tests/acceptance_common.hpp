#pragma once

#include <chrono>
#include <cstdio>
#include <string>

namespace acceptance {

/// Collects one PASS/FAIL line per criterion.
class Report {
public:
    void record(const std::string& id, const std::string& name, bool ok, const std::string& detail) {
        std::printf("%s  [%s] %s: %s\n", ok ? "PASS" : "FAIL", id.c_str(), name.c_str(), detail.c_str());
        std::fflush(stdout);
        failures_ += ok ? 0 : 1;
    }
    void skip(const std::string& id, const std::string& name, const std::string& why) {
        std::printf("SKIP  [%s] %s: %s\n", id.c_str(), name.c_str(), why.c_str());
        std::fflush(stdout);
        ++skips_;
    }
    int failures() const { return failures_; }
    int skips() const { return skips_; }

private:
    int failures_ = 0;
    int skips_ = 0;
};

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace acceptance

#pragma once

// The acceptance set: thirteen end-to-end checks with pinned tolerances and
// time limits, shared by the acceptance runner and `liebox suite`.

#include <cstdint>
#include <string>
#include <vector>

namespace liebox::criteria {

struct Settings {
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::size_t doubling_samples = 1000000;
    std::size_t poincare_samples = 1000000;
    int distance_pairs = 100;
};

struct Result {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
    double limit_seconds = 0.0;
};

/// 1..13
std::vector<int> ids();
std::string name(int id);
double time_limit(int id);

/// Runs one criterion; exceptions are caught and reported as failures. A run
/// that exceeds its time limit fails as well.
Result run(int id, const Settings& settings = {});

/// "PASS  6 bracket-limit  12.3s  detail"
std::string format_line(const Result& r);

}  // namespace liebox::criteria

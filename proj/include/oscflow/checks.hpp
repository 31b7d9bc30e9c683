#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "oscflow/cut.hpp"
#include "oscflow/grid.hpp"

namespace oscflow {

struct CheckOptions {
    std::uint64_t seed = 1;
    double quantum = CutOptions{}.quantum;
    /// Random instances per property; 0 picks each suite's default.
    int trials = 0;
};

struct CheckOutcome {
    std::string name;
    bool ok = false;
    std::string detail;
};

/// Names accepted by run_check_suite, in run order.
const std::vector<std::string>& check_suites();

/// Runs one suite. A property stops at its first failing instance; an
/// exception inside a property is reported as a failure of that property.
std::vector<CheckOutcome> run_check_suite(const std::string& suite, const CheckOptions& options = {});

/// Union of `disks` random disks with radii in [r_min, r_max].
BinarySet random_blob(const Grid2D& grid, std::mt19937_64& rng, int disks, double r_min, double r_max);
/// Union of the set's translates by every offset of the discrete ball of radius r.
BinarySet dilate(const BinarySet& set, double r);

}  // namespace oscflow

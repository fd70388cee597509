#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace grusin::verify {

struct Check {
    std::string name;
    bool pass = false;
    bool informational = false;  // reported, never counted as a failure
    std::string detail;
};

struct SuiteOptions {
    std::uint64_t seed = 0;
    std::string grid = "small";  // "small" or "seed"
    int n = 1;
    double rel_tol = 1e-8;
};

std::vector<Check> run_functions_suite(const SuiteOptions& opt);
std::vector<Check> run_geodesics_suite(const SuiteOptions& opt);
std::vector<Check> run_kernel_suite(const SuiteOptions& opt);
std::vector<Check> run_bounds_suite(const SuiteOptions& opt);
std::vector<Check> run_oracle_suite(const SuiteOptions& opt);

}  // namespace grusin::verify

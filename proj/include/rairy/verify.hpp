#pragma once
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace rairy {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double score = 0.0;  // max over sub-checks of value/bound; pass iff <= 1
    double seconds = 0.0;
};

struct VerifyOptions {
    bool fast = false;               // reduced grids/samples for CI smoke runs
    std::uint64_t seed = 20260823u;  // base seed for the Monte Carlo criterion
};

// run the 12-point verification suite; prints one line per criterion on `log`
std::vector<CriterionResult> run_verification(const VerifyOptions& opt, std::ostream& log);

bool all_passed(const std::vector<CriterionResult>& results);

} // namespace rairy

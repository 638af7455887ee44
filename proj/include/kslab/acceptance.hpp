#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace kslab {

struct CriterionResult {
    int index = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

// Runs the full acceptance suite (or the comma-separated subset of criterion
// numbers in `only`), printing one pass/fail line per criterion. Returns
// true iff every executed criterion passed.
bool run_acceptance(const std::string& only, std::ostream& os);

std::vector<CriterionResult> run_acceptance_detailed(const std::string& only, std::ostream& os);

} // namespace kslab

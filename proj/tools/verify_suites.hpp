#pragma once

#include <string>
#include <vector>

namespace pqbiharm::verify {

struct CheckResult {
    std::string name;
    bool pass;
    std::string detail;
};

/// Available suites: identities, symmetry, rescaling, closed-form, monotonicity, appendix.
std::vector<std::string> suite_names();
bool has_suite(const std::string& name);
std::vector<CheckResult> run_suite(const std::string& name);

}  // namespace pqbiharm::verify

#pragma once

#include "dirac/cli.hpp"

#include <string>
#include <vector>

namespace dirac {

// Built-in libraries of worked instances. Job names start with "c<k> " for
// the criterion k they exercise; where an independent oracle decides the
// verdict in advance, it is attached as the job's expectation.
std::vector<std::string> suite_names();

// criterion 0 selects every criterion. Throws UnknownReference for an
// unknown suite name.
std::vector<Job> suite_jobs(const std::string& suite, int criterion = 0);

constexpr int suite_criteria = 10;

} // namespace dirac

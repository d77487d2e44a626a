#pragma once

#include <functional>
#include <string>

namespace hgm::selftest {

// Runs the invariant suite; reports one line per check through sink.
// Returns the number of failed checks.
int run(const std::function<void(const std::string&)>& sink, int verbosity = 0);

} // namespace hgm::selftest

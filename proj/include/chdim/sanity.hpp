#pragma once

// Machine-checkable invariant battery over the metric/group layers, shared
// by the CLI `sanity` subcommand. Each check reports a residual against its
// ledger threshold.

#include <chdim/hyperbolic.hpp>

namespace chdim {

struct SanityCheck {
  std::string id;
  double residual = 0;
  double threshold = 0;
  bool pass = false;
};

std::vector<SanityCheck> run_sanity_battery(std::uint64_t seed);

}  // namespace chdim

// Sweep a few self-maps of the bidisk against both Schwarz-Pick constants.
//
//   sample_schwarz ["(psi1, psi2)"]

#include <cstdio>
#include <string>
#include <vector>

#include "bidisk/bidisk.hpp"

using namespace bidisk;

namespace {

void report(const std::string& name, const SelfMap& psi) {
  for (SchwarzMode mode : {SchwarzMode::General, SchwarzMode::QClass}) {
    const SchwarzSweep s = schwarz_pick_sweep(psi, mode, 2000, 42);
    std::printf("%-40s %-8s max gap % .3e%s\n", name.c_str(), to_string(mode), s.gap.max,
                s.near_equality ? "  (near equality)" : "");
  }
}

}  // namespace

int main(int argc, char** argv) {
  try {
    if (argc > 1) {
      report(argv[1], parse_self_map(argv[1]));
      return 0;
    }
    const std::vector<std::string> maps{
        "(z2, z1)",
        "(blaschke(0.5, z1), blaschke(0.3i, z2))",
        "((z1+z2)/2, (z1-z2)/2)",
        "(z1*z2, (z1+z2)/2)",
    };
    for (const auto& m : maps) report(m, parse_self_map(m));
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

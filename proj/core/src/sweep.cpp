#include "quasichaos/sweep.hpp"

#include <cstdlib>

namespace quasichaos::sweep {

int default_workers() {
  if (const char* env = std::getenv("QUASICHAOS_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

int resolve_workers(int requested) {
  return requested > 0 ? requested : default_workers();
}

}  // namespace quasichaos::sweep

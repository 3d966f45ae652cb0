#include "betagap/harness.hpp"

#include <omp.h>

#include <cstdlib>
#include <exception>
#include <string>

namespace betagap {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("BETAGAP_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
  }
  return omp_get_max_threads();
}

}  // namespace betagap

#include "hyperricci/parallel.hpp"

#include <cstdlib>

namespace hyperricci {

unsigned default_thread_count() {
  if (const char* env = std::getenv("HYPERRICCI_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
  }
  return 1;
}

}  // namespace hyperricci

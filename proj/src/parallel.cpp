#include "radium/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace radium {

unsigned worker_count(unsigned requested) {
  unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("RADIUM_LAB_THREADS"); cap != nullptr && *cap != '\0') {
    try {
      const unsigned long limit = std::stoul(cap);
      if (limit > 0) n = std::min<unsigned long>(n, limit);
    } catch (const std::exception&) {
      // Unparseable cap is ignored.
    }
  }
  return n;
}

}  // namespace radium

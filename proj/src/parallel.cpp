#include "edgeveritas/parallel.hpp"

#include <cstdlib>
#include <string>

namespace edgeveritas {

unsigned resolve_threads(unsigned requested) {
  unsigned threads = requested;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("EDGEVERITAS_THREADS"); cap && *cap) {
    try {
      const long limit = std::stol(cap);
      if (limit >= 1) threads = std::min<unsigned>(threads, static_cast<unsigned>(limit));
    } catch (const std::exception&) {
      // unparsable cap is ignored
    }
  }
  return threads;
}

}  // namespace edgeveritas

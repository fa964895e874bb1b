#include "qsim/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace qsim {

unsigned max_threads() {
  static unsigned cached = [] {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("QSIM_THREADS")) {
      long v = std::strtol(env, nullptr, 10);
      if (v >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(v));
    }
    return hw;
  }();
  return cached;
}

void parallel_for(uint64_t count, const std::function<void(uint64_t)>& body,
                  unsigned workers) {
  if (workers == 0) workers = max_threads();
  workers = static_cast<unsigned>(std::min<uint64_t>(workers, count));
  if (workers <= 1) {
    for (uint64_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<uint64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= count) return;
        body(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace qsim

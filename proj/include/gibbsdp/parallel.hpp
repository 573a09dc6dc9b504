#ifndef GIBBSDP_PARALLEL_HPP
#define GIBBSDP_PARALLEL_HPP

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gibbsdp {

// Worker budget: GIBBS_DISCOVERY_THREADS if set, hardware concurrency otherwise.
inline int thread_budget() {
  if (const char* env = std::getenv("GIBBS_DISCOVERY_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs f(i) for i in [0, count).  Each task writes only to its own slot, so
// results do not depend on how tasks land on workers.
template <class F>
void parallel_for(long count, F&& f) {
  if (count <= 0) return;
  const int workers = static_cast<int>(std::min<long>(thread_budget(), count));
  if (workers <= 1) {
    for (long i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const long i = next.fetch_add(1);
        if (i >= count) return;
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace gibbsdp

#endif

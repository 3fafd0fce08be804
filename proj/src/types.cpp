#include "nlhelm/types.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace nlhelm {

namespace {
std::atomic<bool> g_serial{false};
}

void force_serial(bool on) { g_serial.store(on); }
bool serial_forced() { return g_serial.load(); }

int worker_count() {
  if (g_serial.load()) return 1;
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  if (const char* env = std::getenv("HELMHOLTZ_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return n;
}

void parallel_for(Index n, const std::function<void(Index)>& f) {
  const int workers = std::min<Index>(worker_count(), n);
  if (workers <= 1 || n < 4) {
    for (Index i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<Index> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const Index i = next.fetch_add(1);
        if (i >= n) return;
        f(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace nlhelm

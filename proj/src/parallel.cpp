#include "dysmooth/parallel.hpp"

#include "dysmooth/error.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace dysmooth {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::validation: return "validation";
    case ErrorKind::capacity: return "capacity";
    case ErrorKind::invariant: return "invariant";
  }
  return "unknown";
}

namespace {

std::atomic<std::size_t> g_threads{0};

std::size_t threads_from_env() {
  std::size_t n = 0;
  if (const char* env = std::getenv("DYSMOOTH_THREADS")) {
    try {
      n = static_cast<std::size_t>(std::stoul(env));
    } catch (const std::exception&) {
      n = 0;
    }
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

}  // namespace

std::size_t thread_count() {
  std::size_t n = g_threads.load();
  if (n == 0) {
    n = threads_from_env();
    g_threads.store(n);
  }
  return n;
}

void set_thread_count(std::size_t n) {
  g_threads.store(n == 0 ? threads_from_env() : n);
}

void parallel_chunks(std::size_t total,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body,
                     std::size_t chunks) {
  if (total == 0) return;
  chunks = std::clamp<std::size_t>(chunks, 1, total);
  const std::size_t base = total / chunks;
  const std::size_t extra = total % chunks;
  auto bounds = [&](std::size_t c) {
    const std::size_t begin = c * base + std::min(c, extra);
    return std::pair{begin, begin + base + (c < extra ? 1 : 0)};
  };
  if (chunks == 1) {
    body(0, 0, total);
    return;
  }
  std::vector<std::exception_ptr> errors(chunks);
  std::vector<std::thread> workers;
  workers.reserve(chunks - 1);
  for (std::size_t c = 1; c < chunks; ++c) {
    workers.emplace_back([&, c] {
      try {
        auto [b, e] = bounds(c);
        body(c, b, e);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  try {
    auto [b, e] = bounds(0);
    body(0, b, e);
  } catch (...) {
    errors[0] = std::current_exception();
  }
  for (auto& w : workers) w.join();
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
}

}  // namespace dysmooth

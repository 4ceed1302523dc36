#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace convo::detail {

// Fixed chunk width for parallel sampling loops. Work is split into
// [k*kChunk, (k+1)*kChunk) ranges handed to workers through an atomic
// ticket, so the set of (index -> output slot) assignments never depends on
// the worker count. Only the interleaving does, and no output depends on it.
inline constexpr std::int64_t kChunk = 8192;

template <class Fn>
void for_each_chunk(std::int64_t n, int threads, Fn&& fn) {
  if (n <= 0) return;
  const std::int64_t chunks = (n + kChunk - 1) / kChunk;
  const int workers =
      static_cast<int>(std::min<std::int64_t>(std::max(threads, 1), chunks));
  if (workers <= 1) {
    for (std::int64_t c = 0; c < chunks; ++c) {
      fn(c, c * kChunk, std::min(n, (c + 1) * kChunk));
    }
    return;
  }

  std::atomic<std::int64_t> ticket{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto body = [&] {
    try {
      for (;;) {
        const std::int64_t c = ticket.fetch_add(1);
        if (c >= chunks) return;
        fn(c, c * kChunk, std::min(n, (c + 1) * kChunk));
      }
    } catch (...) {
      const std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      // Drain the ticket so sibling workers stop picking up chunks.
      ticket.store(chunks);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers) - 1);
  for (int w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace convo::detail

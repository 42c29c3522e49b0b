#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace spinbath::cli {

/// Evaluates fn(0), ..., fn(count - 1) on up to `threads` workers. Results
/// come back in index order whatever the completion order. If any call
/// throws, the exception of the lowest failing index is rethrown after all
/// workers have stopped.
template <typename Fn>
auto parallel_map(std::size_t count, int threads, Fn fn) -> std::vector<decltype(fn(std::size_t{}))> {
  using Result = decltype(fn(std::size_t{}));
  std::vector<std::optional<Result>> slots(count);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> error_index{count};
  std::mutex error_mutex;
  std::exception_ptr error;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      // Indices below a failure still run, so the reported error does not
      // depend on scheduling.
      if (i >= count || i > error_index.load()) return;
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (i < error_index.load()) {
          error_index.store(i);
          error = std::current_exception();
        }
      }
    }
  };

  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || count <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(std::min(workers, count));
    for (std::size_t w = 0; w < std::min(workers, count); ++w) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  std::vector<Result> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace spinbath::cli

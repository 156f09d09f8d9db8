#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace ssindex {

/// Applies fn(index) for index in [0, count) using up to `threads` workers.
/// Results land in a pre-sized vector slot per index, so the output is
/// identical for any thread count.
template <typename Result>
std::vector<Result> parallel_map(std::size_t count, int threads,
                                 const std::function<Result(std::size_t)>& fn) {
  std::vector<Result> results(count);
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
    return results;
  }
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) results[i] = fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

}  // namespace ssindex

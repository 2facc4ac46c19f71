#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace impmc::detail
{
  /// Calls f(i) for i in [0, count) on up to \a jobs threads.  The first
  /// exception thrown stops the remaining work and is rethrown.
  template<class F>
  void
  parallel_for(std::size_t count, unsigned jobs, F&& f)
  {
    if (jobs <= 1 || count <= 1)
      {
        for (std::size_t i = 0; i < count; ++i)
          f(i);
        return;
      }
    std::atomic<std::size_t> next = 0;
    std::atomic<bool> stop = false;
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&]
    {
      for (std::size_t i; !stop && (i = next++) < count;)
        try
          {
            f(i);
          }
        catch (...)
          {
            std::lock_guard lock(error_mutex);
            if (!error)
              error = std::current_exception();
            stop = true;
          }
    };
    std::vector<std::thread> pool;
    unsigned threads = static_cast<unsigned>(
      std::min<std::size_t>(jobs, count));
    for (unsigned t = 1; t < threads; ++t)
      pool.emplace_back(work);
    work();
    for (auto& t: pool)
      t.join();
    if (error)
      std::rethrow_exception(error);
  }
}

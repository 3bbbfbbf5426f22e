#pragma once

#include <barrier>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace lavanet {

/// Fixed pool of workers stepping in lockstep. parallelFor hands out task
/// indices round-robin (task i runs on worker i % threads) and returns only
/// after every task finished, which is the barrier between two phases of a
/// timestep. With one thread everything runs inline on the caller.
class CoreScheduler {
 public:
  explicit CoreScheduler(std::size_t threads);
  ~CoreScheduler();

  CoreScheduler(const CoreScheduler&) = delete;
  CoreScheduler& operator=(const CoreScheduler&) = delete;

  std::size_t threads() const { return threads_; }

  /// Rethrows the first exception raised by a task.
  void parallelFor(std::size_t count, const std::function<void(std::size_t)>& task);

 private:
  void workerLoop(std::size_t worker);
  void runShare(std::size_t worker);

  std::size_t threads_;
  std::barrier<> start_;
  std::barrier<> done_;
  std::vector<std::jthread> workers_;
  const std::function<void(std::size_t)>* task_ = nullptr;
  std::size_t count_ = 0;
  bool stopping_ = false;
  std::vector<std::exception_ptr> errors_;
};

}  // namespace lavanet

#include "lavanet/scheduler.hpp"

#include <algorithm>

namespace lavanet {

CoreScheduler::CoreScheduler(std::size_t threads)
    : threads_(std::max<std::size_t>(1, threads)),
      start_(static_cast<std::ptrdiff_t>(threads_)),
      done_(static_cast<std::ptrdiff_t>(threads_)),
      errors_(threads_) {
  // The calling thread acts as worker 0.
  for (std::size_t w = 1; w < threads_; ++w) {
    workers_.emplace_back([this, w] { workerLoop(w); });
  }
}

CoreScheduler::~CoreScheduler() {
  if (threads_ > 1) {
    stopping_ = true;
    start_.arrive_and_wait();
  }
}

void CoreScheduler::runShare(std::size_t worker) {
  try {
    for (std::size_t i = worker; i < count_; i += threads_) (*task_)(i);
  } catch (...) {
    errors_[worker] = std::current_exception();
  }
}

void CoreScheduler::workerLoop(std::size_t worker) {
  while (true) {
    start_.arrive_and_wait();
    if (stopping_) return;
    runShare(worker);
    done_.arrive_and_wait();
  }
}

void CoreScheduler::parallelFor(std::size_t count, const std::function<void(std::size_t)>& task) {
  if (threads_ == 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  task_ = &task;
  count_ = count;
  start_.arrive_and_wait();
  runShare(0);
  done_.arrive_and_wait();
  task_ = nullptr;
  for (auto& error : errors_) {
    if (error) {
      auto first = error;
      for (auto& e : errors_) e = nullptr;
      std::rethrow_exception(first);
    }
  }
}

}  // namespace lavanet

#include "ohmlab/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace ohmlab {

namespace {

std::size_t threads_from_env() {
  std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  const char* env = std::getenv("OHMLAB_THREADS");
  if (env == nullptr || *env == '\0') return hw;
  try {
    long long v = std::stoll(env);
    if (v <= 0) return hw;
    return std::min<std::size_t>(static_cast<std::size_t>(v), hw);
  } catch (const std::exception&) {
    return hw;
  }
}

std::atomic<std::size_t>& thread_setting() {
  static std::atomic<std::size_t> setting{threads_from_env()};
  return setting;
}

}  // namespace

std::size_t max_threads() { return thread_setting().load(); }

void set_max_threads(std::size_t threads) {
  if (threads == 0) threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  thread_setting().store(threads);
}

}  // namespace ohmlab

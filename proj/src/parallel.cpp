#include "optomech/parallel.hpp"

#include <atomic>

namespace optomech {

namespace {
std::atomic<bool> g_parallel{true};
}

bool parallel_enabled() noexcept { return g_parallel.load(std::memory_order_relaxed); }

SerialScope::SerialScope() noexcept : previous_(g_parallel.exchange(false)) {}

SerialScope::~SerialScope() { g_parallel.store(previous_); }

}  // namespace optomech

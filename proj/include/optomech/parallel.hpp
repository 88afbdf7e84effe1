#pragma once

namespace optomech {

/// OpenMP loops in the library fan out only while this is true. Cleared by
/// SerialScope to get the one-thread reference path of the same kernels.
bool parallel_enabled() noexcept;

class SerialScope {
 public:
  SerialScope() noexcept;
  ~SerialScope();
  SerialScope(const SerialScope&) = delete;
  SerialScope& operator=(const SerialScope&) = delete;

 private:
  bool previous_;
};

}  // namespace optomech

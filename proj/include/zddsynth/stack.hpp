/// @file stack.hpp
/// Runs deeply recursive work on a thread with a large stack.

#pragma once

#include <cstddef>
#include <functional>

namespace zsynth {

/// Calls fn on a fresh thread and rethrows whatever it throws.
void run_with_large_stack(const std::function<void()>& fn,
                          std::size_t stack_bytes = std::size_t{1} << 29);

}  // namespace zsynth

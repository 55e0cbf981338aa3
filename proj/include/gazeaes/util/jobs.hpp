#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace gazeaes::util {

struct JobFailure {
    std::size_t index = 0;
    std::string message;
};

/// Runs job(0) .. job(count-1) on up to `workers` threads (0 or 1 runs
/// inline, in order). Jobs must not share mutable state. Every job runs even
/// if others throw; failures come back sorted by index.
std::vector<JobFailure> run_jobs(std::size_t count, std::size_t workers,
                                 const std::function<void(std::size_t)>& job);

}  // namespace gazeaes::util

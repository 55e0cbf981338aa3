#include "gazeaes/util/jobs.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace gazeaes::util {

std::vector<JobFailure> run_jobs(std::size_t count, std::size_t workers,
                                 const std::function<void(std::size_t)>& job) {
    std::vector<JobFailure> failures;
    std::mutex failures_mutex;
    auto run_one = [&](std::size_t i) {
        try {
            job(i);
        } catch (const std::exception& e) {
            std::lock_guard lock(failures_mutex);
            failures.push_back({i, e.what()});
        } catch (...) {
            std::lock_guard lock(failures_mutex);
            failures.push_back({i, "unknown exception"});
        }
    };

    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) run_one(i);
        return failures;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> threads;
    const std::size_t n = std::min(workers, count);
    threads.reserve(n);
    for (std::size_t t = 0; t < n; ++t) {
        threads.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) run_one(i);
        });
    }
    for (auto& t : threads) t.join();
    std::sort(failures.begin(), failures.end(), [](const auto& a, const auto& b) { return a.index < b.index; });
    return failures;
}

}  // namespace gazeaes::util

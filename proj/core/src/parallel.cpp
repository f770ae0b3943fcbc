#include "binq4/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <mutex>
#include <exception>
#include <thread>
#include <vector>

namespace binq4 {

int thread_budget() {
    if (const char* env = std::getenv("BINQ4_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1)
            return int(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw >= 1 ? int(hw) : 1;
}

void parallel_for(long chunks, const std::function<void(long)>& fn) {
    if (chunks <= 0)
        return;
    long workers = std::min<long>(thread_budget(), chunks);
    if (workers <= 1) {
        for (long i = 0; i < chunks; ++i)
            fn(i);
        return;
    }
    std::atomic<long> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            long i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= chunks)
                return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(size_t(workers));
    for (long w = 0; w < workers; ++w)
        pool.emplace_back(work);
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

} // namespace binq4

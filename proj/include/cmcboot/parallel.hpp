#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cmcboot {

/**
Run body(i) for i in [0, count) on up to `degree` worker threads.

Tasks must be independent and write only to their own output slot; under
that contract the result is identical for every degree, because work is
distributed by an atomic index counter, not by data partitioning. degree <= 1
runs inline. The first exception thrown by any task is rethrown on the
caller thread after all workers finish.
*/
template <typename Body>
void parallel_for(long count, int degree, Body&& body) {
    if (count <= 0) return;
    if (degree <= 1 || count == 1) {
        for (long i = 0; i < count; ++i) body(i);
        return;
    }

    const int workers = int(std::min<long>(degree, count));
    std::atomic<long> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (;;) {
            const long i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w) threads.emplace_back(worker);
    for (std::thread& thread : threads) thread.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace cmcboot

#include "monas/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace monas {

namespace {
thread_local bool in_pool = false;
}

int default_workers() {
    if (const char* env = std::getenv("MONAS_WORKERS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  int workers) {
    if (n == 0) return;
    if (workers <= 0) workers = default_workers();
    std::size_t nthreads = static_cast<std::size_t>(workers);
    if (nthreads > n) nthreads = n;

    if (nthreads <= 1 || in_pool) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> cursor{0};
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> threads;
    threads.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) {
        threads.emplace_back([&]() {
            in_pool = true;
            for (;;) {
                std::size_t i = cursor.fetch_add(1);
                if (i >= n) break;
                try {
                    fn(i);
                } catch (...) {
                    bool expected = false;
                    if (failed.compare_exchange_strong(expected, true)) {
                        first_error = std::current_exception();
                    }
                }
            }
            in_pool = false;
        });
    }
    for (auto& th : threads) th.join();
    if (failed.load() && first_error) std::rethrow_exception(first_error);
}

} // namespace monas

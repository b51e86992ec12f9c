#include "loopgerbe/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace loopgerbe {

namespace {
std::atomic<int> g_override{0};
}

int thread_count()
{
    if (int o = g_override.load(); o > 0) {
        return o;
    }
    int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("LOOPGERBE_THREADS")) {
        try {
            int cap = std::stoi(env);
            if (cap > 0) {
                n = std::min(n, cap);
            }
        } catch (const std::exception&) {
            // Unparsable values are ignored.
        }
    }
    return n;
}

void set_thread_count(int n) { g_override.store(std::max(0, n)); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body)
{
    std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) {
        pool.emplace_back(run);
    }
    run();
    pool.clear();
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

} // namespace loopgerbe

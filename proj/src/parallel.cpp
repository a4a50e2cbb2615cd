#include "qinv/parallel.hpp"

#include <atomic>

namespace qinv::par {

namespace {
std::atomic<int> g_threads{0};
}

void set_thread_count(int n) {
    g_threads.store(n < 0 ? 0 : n);
}

int thread_count() {
    return g_threads.load();
}

bool serial() {
    return g_threads.load() == 1;
}

}  // namespace qinv::par

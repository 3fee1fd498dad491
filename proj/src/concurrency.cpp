#include "proxdeep/concurrency.hpp"

#include <atomic>
#include <cstdlib>
#include <future>
#include <vector>

namespace proxdeep {

namespace {

std::atomic<bool> g_force_sequential{false};

int env_workers() {
    const char* env = std::getenv("PROXDEEP_THREADS");
    if (!env) return 1;
    const int v = std::atoi(env);
    return v >= 1 ? v : 1;
}

}  // namespace

int effective_workers() {
    if (g_force_sequential.load()) return 1;
    static const int cap = env_workers();
    return cap;
}

void force_sequential(bool on) { g_force_sequential.store(on); }

void run_indexed(int n, const std::function<void(int)>& fn) {
    const int workers = std::min(effective_workers(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::future<void>> futures;
    futures.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        futures.push_back(std::async(std::launch::async, [&]() {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        }));
    }
    for (auto& f : futures) f.get();  // rethrows the first worker exception
}

}  // namespace proxdeep

#include "tuckmat/memlog.hpp"

#include <atomic>

namespace tuckmat::memlog {

namespace {
std::atomic<std::int64_t> g_current{0};
std::atomic<std::int64_t> g_peak{0};
} // namespace

void reset() {
    g_current.store(0);
    g_peak.store(0);
}

void add(std::int64_t bytes) {
    const std::int64_t now = g_current.fetch_add(bytes) + bytes;
    if (bytes > 0) {
        std::int64_t seen = g_peak.load();
        while (now > seen && !g_peak.compare_exchange_weak(seen, now)) {
        }
    }
}

std::int64_t current() { return g_current.load(); }
std::int64_t peak() { return g_peak.load(); }

} // namespace tuckmat::memlog

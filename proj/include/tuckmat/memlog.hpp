#pragma once

#include <cstdint>

namespace tuckmat::memlog {

// Global accounting of the library's own dense scalar buffers (Tensor3
// payloads, unfolding copies, the dense oracle matrix). Used by tests to
// verify the streaming memory bounds of compress_matrix and tucker_aca.
// Eigen-internal SVD workspace and small factor matrices are not counted.

void reset();
void add(std::int64_t bytes);
std::int64_t current();
std::int64_t peak();

// RAII registration for a buffer the log should see for its lifetime.
class ScopedBytes {
public:
    explicit ScopedBytes(std::int64_t bytes) : bytes_(bytes) { add(bytes_); }
    ~ScopedBytes() { add(-bytes_); }
    ScopedBytes(const ScopedBytes&) = delete;
    ScopedBytes& operator=(const ScopedBytes&) = delete;

private:
    std::int64_t bytes_;
};

} // namespace tuckmat::memlog

#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace bmtk {

enum class ErrorCode {
    invalid_argument = 1,
    precondition = 2,
    io = 3,
    cfl = 4,
    assertion = 5,
    internal = 6,
};

/// Library-wide exception carrying a coarse code for the C API mapping.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail_invalid(const std::string& msg) { throw Error(ErrorCode::invalid_argument, msg); }
[[noreturn]] inline void fail_precondition(const std::string& msg) { throw Error(ErrorCode::precondition, msg); }
[[noreturn]] inline void fail_io(const std::string& msg) { throw Error(ErrorCode::io, msg); }
[[noreturn]] inline void fail_cfl(const std::string& msg) { throw Error(ErrorCode::cfl, msg); }

// 64-byte alignment keeps FFTW new-array execution valid across all buffers.
template <typename T>
struct AlignedAllocator {
    using value_type = T;
    static constexpr std::size_t alignment = 64;

    AlignedAllocator() = default;
    template <typename U>
    AlignedAllocator(const AlignedAllocator<U>&) {}

    T* allocate(std::size_t n) {
        void* p = std::aligned_alloc(alignment, ((n * sizeof(T) + alignment - 1) / alignment) * alignment);
        if (!p) throw std::bad_alloc();
        return static_cast<T*>(p);
    }
    void deallocate(T* p, std::size_t) { std::free(p); }

    template <typename U>
    bool operator==(const AlignedAllocator<U>&) const { return true; }
};

// SplitMix64: platform-stable generator used for every random draw in the
// project.  Trial streams are split in counter mode so parallel execution
// cannot reorder draws.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0,1) with 53 significant bits.
    double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t counter) {
    SplitMix64 g(master ^ (0xA0761D6478BD642FULL * (counter + 1)));
    return g.next();
}

/// Worker cap: BMTK_THREADS if set, else hardware concurrency.
inline unsigned worker_count() {
    if (const char* env = std::getenv("BMTK_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

/// Index-ordered parallel loop.  Each index writes only its own outputs, so
/// results are identical for any worker count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    unsigned workers = worker_count();
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::atomic<std::size_t> cursor{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = cursor.fetch_add(1);
                if (i >= n) break;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace bmtk

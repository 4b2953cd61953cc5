// Copyright 2026 The gsw Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file core.hpp
 * @brief Shared scalar types, the error type, and the deterministic
 * parallel-for used by every module.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace gsw {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;
using RVec = std::vector<double>;

inline constexpr const char* kVersion = "0.1.0";

/// Error raised for contract violations (bad input, size mismatch, etc.).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a file cannot be opened or written.
class IoError : public Error {
public:
    using Error::Error;
};

inline constexpr cplx kI{0.0, 1.0};

/// Worker cap. GSW_THREADS overrides the hardware concurrency.
inline std::size_t thread_cap() {
    if (const char* env = std::getenv("GSW_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/**
 * Runs fn(i) for i in [0, n). Work items are independent; callers write to
 * index-addressed slots and reduce afterwards in index order, so results do
 * not depend on the thread count. The first exception is rethrown.
 */
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const std::size_t workers = std::min(thread_cap(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) {
                try {
                    fn(i);
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

/// Inner product <a|b> with a fixed left-to-right summation order.
inline cplx inner(const CVec& a, const CVec& b) {
    if (a.size() != b.size()) throw Error("inner: size mismatch");
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

inline double norm2(const CVec& a) { return std::sqrt(std::real(inner(a, a))); }

}  // namespace gsw

/*
   Copyright 2026 The dsqm Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace dsqm::detail {

/// Runs fn(block, first, count) for every block of `block_size` items out of
/// `n` and returns the results in block order, independent of `threads`.
template <class R, class BlockFn>
std::vector<R> map_blocks(std::uint64_t n, std::uint64_t block_size, unsigned threads, BlockFn&& fn) {
    block_size = std::max<std::uint64_t>(block_size, 1);
    const std::uint64_t blocks = (n + block_size - 1) / block_size;
    std::vector<R> results(blocks);
    auto run_one = [&](std::uint64_t b) {
        const std::uint64_t first = b * block_size;
        results[b] = fn(b, first, std::min(block_size, n - first));
    };

    const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(std::max(threads, 1u), blocks));
    if (workers <= 1) {
        for (std::uint64_t b = 0; b < blocks; ++b) {
            run_one(b);
        }
        return results;
    }

    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (auto b = next.fetch_add(1); b < blocks; b = next.fetch_add(1)) {
                try {
                    run_one(b);
                } catch (...) {
                    const std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                    next.store(blocks);
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return results;
}

} // namespace dsqm::detail

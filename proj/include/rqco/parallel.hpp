// Copyright 2026 The rqco Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Deterministic parallel reduction over a basis-index range.
//
// The range is cut into a fixed number of contiguous chunks that depends only
// on the range length. Workers pull chunks from a shared counter and produce
// one partial per chunk; after all workers finish, partials are merged in
// ascending chunk order.
// The floating-point result is therefore the same for every worker count.

#ifndef RQCO_PARALLEL_HPP_
#define RQCO_PARALLEL_HPP_

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

#include "rqco/types.hpp"

namespace rqco {

struct IndexRange {
  std::uint64_t begin = 0;
  std::uint64_t end = 0;
  std::uint64_t size() const { return end - begin; }
};

inline constexpr std::uint64_t kMaxChunks = 64;

inline std::uint64_t chunk_count_for(std::uint64_t range) {
  return std::max<std::uint64_t>(1, std::min(range, kMaxChunks));
}

// Contiguous, disjoint chunks covering [0, range); sizes differ by at most one.
inline std::vector<IndexRange> chunk_partition(std::uint64_t range,
                                               std::uint64_t chunk_count) {
  if (chunk_count == 0) throw Error("chunk_partition: zero chunks");
  chunk_count = std::min(chunk_count, std::max<std::uint64_t>(range, 1));
  std::vector<IndexRange> out;
  out.reserve(chunk_count);
  const std::uint64_t base = range / chunk_count, extra = range % chunk_count;
  std::uint64_t begin = 0;
  for (std::uint64_t c = 0; c < chunk_count; ++c) {
    const std::uint64_t len = base + (c < extra ? 1 : 0);
    out.push_back({begin, begin + len});
    begin += len;
  }
  return out;
}

// eval_chunk(IndexRange) -> Accumulator; merge(Accumulator& total, Accumulator&& part).
template <typename Accumulator, typename ChunkFn, typename MergeFn>
Accumulator parallel_reduce(std::uint64_t range, int worker_count, ChunkFn&& eval_chunk,
                            MergeFn&& merge) {
  if (worker_count < 1) throw Error("parallel_reduce: worker_count must be >= 1");
  const auto chunks = chunk_partition(range, chunk_count_for(range));
  const std::size_t n = chunks.size();

  std::vector<std::optional<Accumulator>> partials(n);
  std::atomic<std::size_t> next_chunk{0};
  std::atomic<bool> failed{false};
  std::vector<std::exception_ptr> errors(n);

  auto work = [&] {
    for (;;) {
      const std::size_t c = next_chunk.fetch_add(1);
      if (c >= n || failed.load()) return;
      try {
        partials[c].emplace(eval_chunk(chunks[c]));
      } catch (...) {
        errors[c] = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };

  const int extra = std::min<int>(worker_count, static_cast<int>(n)) - 1;
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(std::max(extra, 0)));
  for (int t = 0; t < extra; ++t) threads.emplace_back(work);
  work();
  for (auto& t : threads) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  Accumulator total = std::move(*partials[0]);
  for (std::size_t c = 1; c < n; ++c) merge(total, std::move(*partials[c]));
  return total;
}

}  // namespace rqco

#endif  // RQCO_PARALLEL_HPP_

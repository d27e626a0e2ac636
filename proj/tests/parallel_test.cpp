// Copyright 2026 The bitrev Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <stdexcept>
#include <string>

#include "bitrev/parallel.hpp"

namespace bitrev {
namespace {

TEST(ParallelMap, ResultsAreIndexedRegardlessOfJobs) {
  for (unsigned jobs : {1u, 2u, 8u}) {
    auto out = parallel_map(100, jobs, [](std::size_t i) { return i * i; });
    ASSERT_EQ(out.size(), 100u);
    for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i], i * i);
  }
}

TEST(ParallelMap, EmptyInput) {
  EXPECT_TRUE(parallel_map(0, 4, [](std::size_t i) { return i; }).empty());
}

TEST(ParallelMap, RethrowsLowestFailedIndexSequentially) {
  try {
    parallel_map(10, 1, [](std::size_t i) -> int {
      if (i == 3 || i == 7) throw std::runtime_error(std::to_string(i));
      return 0;
    });
    FAIL() << "expected an exception";
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "3");
  }
}

TEST(ParallelMap, ParallelFailurePropagates) {
  EXPECT_THROW(parallel_map(64, 4,
                            [](std::size_t i) -> int {
                              if (i % 16 == 5) throw std::runtime_error("boom");
                              return 1;
                            }),
               std::runtime_error);
}

}  // namespace
}  // namespace bitrev

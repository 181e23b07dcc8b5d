#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "wfkdv/parallel.hpp"

using namespace wfkdv;

TEST_CASE("thread count resolution") {
  CHECK(resolve_thread_count(3) == 3);
  ::setenv("WAVEFRONT_KDV_THREADS", "2", 1);
  CHECK(resolve_thread_count(0) == 2);
  CHECK(resolve_thread_count(5) == 5);
  ::unsetenv("WAVEFRONT_KDV_THREADS");
  CHECK(resolve_thread_count(0) >= 1);
}

TEST_CASE("parallel loop covers every index once") {
  for (unsigned threads : {1u, 2u, 4u}) {
    std::vector<std::atomic<int>> hits(97);
    parallel_for(hits.size(), threads, [&](std::size_t i) { hits[i]++; });
    for (const auto& h : hits) CHECK(h.load() == 1);
  }
  parallel_for(0, 4, [](std::size_t) { FAIL("no work expected"); });
}

TEST_CASE("exceptions reach the caller") {
  std::atomic<int> done{0};
  CHECK_THROWS_AS(parallel_for(20, 3,
                               [&](std::size_t i) {
                                 if (i == 7) throw std::runtime_error("boom");
                                 done++;
                               }),
                  std::runtime_error);
  CHECK(done.load() <= 19);
}

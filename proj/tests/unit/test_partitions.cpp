#include "doctest.h"

#include <set>

#include "fck/errors.hpp"
#include "fck/partitions.hpp"

using namespace fck;

namespace {

// Brute force: insert elements one at a time into existing blocks or a new block.
std::vector<std::vector<std::vector<int>>> all_partitions_by_insertion(int n) {
  std::vector<std::vector<std::vector<int>>> cur{{}};
  for (int x = 1; x <= n; ++x) {
    std::vector<std::vector<std::vector<int>>> next;
    for (const auto& p : cur) {
      for (std::size_t b = 0; b < p.size(); ++b) {
        auto q = p;
        q[b].push_back(x);
        next.push_back(q);
      }
      auto q = p;
      q.push_back({x});
      next.push_back(q);
    }
    cur = std::move(next);
  }
  return cur;
}

bool crosses(const std::vector<std::vector<int>>& blocks) {
  for (const auto& a : blocks)
    for (const auto& b : blocks) {
      if (&a == &b) continue;
      for (int i1 : a)
        for (int j1 : b)
          for (int i2 : a)
            for (int j2 : b)
              if (i1 < j1 && j1 < i2 && i2 < j2) return true;
    }
  return false;
}

bool contiguous(const std::vector<std::vector<int>>& blocks) {
  for (const auto& b : blocks)
    if (b.back() - b.front() + 1 != static_cast<int>(b.size())) return false;
  return true;
}

}  // namespace

TEST_CASE("single element has one partition") {
  auto ps = enumerate_partitions(1, PartitionFamily::all);
  REQUIRE(ps.size() == 1);
  CHECK(ps[0].to_string() == "{1}");
}

TEST_CASE("family counts match brute-force filtering") {
  for (int n = 1; n <= 8; ++n) {
    auto brute = all_partitions_by_insertion(n);
    std::size_t nc = 0, in = 0;
    for (const auto& p : brute) {
      if (!crosses(p)) ++nc;
      if (contiguous(p)) ++in;
    }
    CHECK(count_partitions(n, PartitionFamily::all) == brute.size());
    CHECK(count_partitions(n, PartitionFamily::noncrossing) == nc);
    CHECK(count_partitions(n, PartitionFamily::interval) == in);
  }
  CHECK(count_partitions(4, PartitionFamily::noncrossing) == 14);
  CHECK(count_partitions(4, PartitionFamily::interval) == 8);
}

TEST_CASE("enumerated families equal filtered sets in the same order") {
  for (int n = 1; n <= 9; ++n) {
    std::vector<std::vector<int>> nc_filtered, int_filtered;
    for_each_partition(n, PartitionFamily::all, [&](std::span<const int> l) {
      std::vector<int> v(l.begin(), l.end());
      if (labels_noncrossing(l)) nc_filtered.push_back(v);
      if (labels_interval(l)) int_filtered.push_back(v);
    });
    std::vector<std::vector<int>> nc, in;
    for_each_partition(n, PartitionFamily::noncrossing,
                       [&](std::span<const int> l) { nc.emplace_back(l.begin(), l.end()); });
    for_each_partition(n, PartitionFamily::interval,
                       [&](std::span<const int> l) { in.emplace_back(l.begin(), l.end()); });
    CHECK(nc == nc_filtered);
    CHECK(in == int_filtered);
  }
}

TEST_CASE("interval counts are powers of two") {
  for (int n = 1; n <= 12; ++n) CHECK(count_partitions(n, PartitionFamily::interval) == (std::size_t{1} << (n - 1)));
}

TEST_CASE("size cap") {
  CHECK_THROWS_AS(enumerate_partitions(15, PartitionFamily::noncrossing), SizeLimitError);
  CHECK_THROWS_AS(enumerate_partitions(0, PartitionFamily::all), SizeLimitError);
  CHECK(count_partitions(15, PartitionFamily::interval, 15) == (std::size_t{1} << 14));
}

TEST_CASE("canonical form and parsing") {
  Partition p(3, {{3, 1}, {2}});
  CHECK(p.to_string() == "{1,3|2}");
  CHECK(Partition::parse("{2|3,1}") == p);
  CHECK(!p.is_interval());
  CHECK(p.is_noncrossing());
  CHECK(!Partition::parse("{1,3|2,4}").is_noncrossing());
  CHECK_THROWS_AS(Partition(3, {{1, 2}, {2, 3}}), DomainError);
  CHECK_THROWS_AS(Partition(3, {{1}, {3}}), DomainError);
  CHECK_THROWS_AS(Partition::parse("1,2"), ParseError);
}

TEST_CASE("order examples") {
  auto bottom = Partition::singletons(3);
  for (const auto& q : enumerate_partitions(3, PartitionFamily::all)) CHECK(compare_leq(bottom, q));
  CHECK(compare_leq(Partition::parse("{1,3|2}"), Partition::one(3)));
  CHECK(!compare_leq(Partition::parse("{1,2|3}"), Partition::parse("{1,3|2}")));
  CHECK(!compare_leq(Partition::parse("{1,3|2}"), Partition::parse("{1,2|3}")));
  CHECK_THROWS_AS(compare_leq(Partition::one(2), Partition::one(3)), DimensionError);
}

TEST_CASE("join examples") {
  CHECK(join_partitions(Partition::parse("{1|2,3}"), Partition::parse("{1,2|3}")) == Partition::one(3));
  auto q = Partition::parse("{1,4|2|3}");
  CHECK(join_partitions(q, q) == q);
  CHECK(join_partitions(Partition::singletons(4), q) == q);
  CHECK_THROWS_AS(join_partitions(Partition::one(2), Partition::one(3)), DimensionError);
}

TEST_CASE("refinement is a partial order on each family") {
  for (auto fam : {PartitionFamily::all, PartitionFamily::noncrossing, PartitionFamily::interval}) {
    for (int n = 1; n <= 5; ++n) {
      auto ps = enumerate_partitions(n, fam);
      for (const auto& a : ps) {
        CHECK(compare_leq(a, a));
        for (const auto& b : ps) {
          if (compare_leq(a, b) && compare_leq(b, a)) CHECK(a == b);
          if (!compare_leq(a, b)) continue;
          for (const auto& c : ps)
            if (compare_leq(b, c)) CHECK(compare_leq(a, c));
        }
      }
    }
  }
}

TEST_CASE("join is the least upper bound") {
  for (int n = 1; n <= 5; ++n) {
    auto ps = enumerate_partitions(n, PartitionFamily::all);
    for (const auto& a : ps)
      for (const auto& b : ps) {
        auto j = join_partitions(a, b);
        REQUIRE(compare_leq(a, j));
        REQUIRE(compare_leq(b, j));
        for (const auto& r : ps)
          if (compare_leq(a, r) && compare_leq(b, r)) REQUIRE(compare_leq(j, r));
      }
  }
}

TEST_CASE("join of interval partitions is an interval partition") {
  for (int n = 1; n <= 8; ++n) {
    auto ps = enumerate_partitions(n, PartitionFamily::interval);
    for (const auto& a : ps)
      for (const auto& b : ps) REQUIRE(join_partitions(a, b).is_interval());
  }
}

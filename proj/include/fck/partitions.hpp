#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fck {

inline constexpr int kDefaultPartitionCap = 14;

enum class PartitionFamily { all, noncrossing, interval };

PartitionFamily parse_family(std::string_view s);
std::string family_name(PartitionFamily f);

// A set partition of {1..n}. Blocks are kept sorted by minimum, elements ascending.
class Partition {
 public:
  Partition() = default;
  Partition(int n, std::vector<std::vector<int>> blocks);

  // labels[i] is the block index of element i+1; any labelling is accepted.
  static Partition from_labels(std::span<const int> labels);
  static Partition one(int n);
  static Partition singletons(int n);
  // Parses "{1,3|2}".
  static Partition parse(std::string_view text);

  int size() const { return n_; }
  std::size_t block_count() const { return blocks_.size(); }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  // Restricted growth string: block index (0-based) of each element.
  std::vector<int> labels() const;

  bool is_noncrossing() const;
  bool is_interval() const;
  std::string to_string() const;

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.n_ == b.n_ && a.blocks_ == b.blocks_;
  }

 private:
  int n_ = 0;
  std::vector<std::vector<int>> blocks_;
};

// Visits each partition as its restricted growth string, in lexicographic RGS order.
void for_each_partition(int n, PartitionFamily family,
                        const std::function<void(std::span<const int>)>& visit,
                        int max_n = kDefaultPartitionCap);

std::vector<Partition> enumerate_partitions(int n, PartitionFamily family,
                                            int max_n = kDefaultPartitionCap);
std::size_t count_partitions(int n, PartitionFamily family, int max_n = kDefaultPartitionCap);

bool compare_leq(const Partition& p, const Partition& q);
Partition join_partitions(const Partition& p, const Partition& q);

// Direct tests on a labelling; used by the enumerator and as filters.
bool labels_noncrossing(std::span<const int> labels);
bool labels_interval(std::span<const int> labels);

}  // namespace fck

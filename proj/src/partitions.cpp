#include "fck/partitions.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "fck/errors.hpp"

namespace fck {

PartitionFamily parse_family(std::string_view s) {
  if (s == "all") return PartitionFamily::all;
  if (s == "nc" || s == "noncrossing") return PartitionFamily::noncrossing;
  if (s == "int" || s == "interval") return PartitionFamily::interval;
  throw ParseError("unknown partition family '" + std::string(s) + "' (expected nc|int|all)");
}

std::string family_name(PartitionFamily f) {
  switch (f) {
    case PartitionFamily::all: return "all";
    case PartitionFamily::noncrossing: return "nc";
    case PartitionFamily::interval: return "int";
  }
  return "?";
}

Partition::Partition(int n, std::vector<std::vector<int>> blocks) : n_(n) {
  if (n < 1) throw DomainError("partition ground set must be nonempty");
  std::vector<int> seen(static_cast<std::size_t>(n) + 1, 0);
  for (auto& b : blocks) {
    if (b.empty()) throw DomainError("partition has an empty block");
    std::sort(b.begin(), b.end());
    for (int x : b) {
      if (x < 1 || x > n) throw DomainError("element " + std::to_string(x) + " outside 1.." + std::to_string(n));
      if (seen[x]++) throw DomainError("element " + std::to_string(x) + " appears twice");
    }
  }
  for (int x = 1; x <= n; ++x)
    if (!seen[x]) throw DomainError("element " + std::to_string(x) + " missing from partition");
  std::sort(blocks.begin(), blocks.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  blocks_ = std::move(blocks);
}

Partition Partition::from_labels(std::span<const int> labels) {
  int n = static_cast<int>(labels.size());
  std::vector<int> index;
  std::vector<int> remap;
  std::vector<std::vector<int>> blocks;
  std::vector<std::pair<int, int>> key;  // label -> block
  for (int i = 0; i < n; ++i) {
    int l = labels[i];
    auto it = std::find_if(key.begin(), key.end(), [&](auto& kv) { return kv.first == l; });
    if (it == key.end()) {
      key.emplace_back(l, static_cast<int>(blocks.size()));
      blocks.push_back({i + 1});
    } else {
      blocks[it->second].push_back(i + 1);
    }
  }
  return Partition(n, std::move(blocks));
}

Partition Partition::one(int n) {
  std::vector<int> b(n);
  std::iota(b.begin(), b.end(), 1);
  return Partition(n, {b});
}

Partition Partition::singletons(int n) {
  std::vector<std::vector<int>> bs;
  for (int i = 1; i <= n; ++i) bs.push_back({i});
  return Partition(n, bs);
}

Partition Partition::parse(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.size() < 2 || s.front() != '{' || s.back() != '}')
    throw ParseError("partition must look like {1,3|2}: '" + std::string(text) + "'");
  s = s.substr(1, s.size() - 2);
  std::vector<std::vector<int>> blocks;
  int n = 0;
  std::stringstream bs(s);
  std::string block;
  while (std::getline(bs, block, '|')) {
    std::vector<int> b;
    std::stringstream es(block);
    std::string e;
    while (std::getline(es, e, ',')) {
      try {
        std::size_t used = 0;
        int v = std::stoi(e, &used);
        if (used != e.size()) throw ParseError("bad element '" + e + "'");
        b.push_back(v);
        n = std::max(n, v);
      } catch (const std::logic_error&) {
        throw ParseError("bad element '" + e + "' in partition");
      }
    }
    blocks.push_back(b);
  }
  return Partition(n, std::move(blocks));
}

std::vector<int> Partition::labels() const {
  std::vector<int> l(static_cast<std::size_t>(n_));
  for (std::size_t b = 0; b < blocks_.size(); ++b)
    for (int x : blocks_[b]) l[x - 1] = static_cast<int>(b);
  return l;
}

bool Partition::is_noncrossing() const {
  auto l = labels();
  return labels_noncrossing(l);
}

bool Partition::is_interval() const {
  auto l = labels();
  return labels_interval(l);
}

std::string Partition::to_string() const {
  std::string out = "{";
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    if (b) out += '|';
    for (std::size_t i = 0; i < blocks_[b].size(); ++i) {
      if (i) out += ',';
      out += std::to_string(blocks_[b][i]);
    }
  }
  return out + "}";
}

bool labels_noncrossing(std::span<const int> l) {
  int n = static_cast<int>(l.size());
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      if (l[b] == l[a]) continue;
      for (int c = b + 1; c < n; ++c) {
        if (l[c] != l[a]) continue;
        for (int d = c + 1; d < n; ++d)
          if (l[d] == l[b]) return false;
      }
    }
  return true;
}

bool labels_interval(std::span<const int> l) {
  int n = static_cast<int>(l.size());
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      if (l[b] == l[a]) continue;
      for (int c = b + 1; c < n; ++c)
        if (l[c] == l[a]) return false;
    }
  return true;
}

namespace {

struct Enumerator {
  int n;
  PartitionFamily family;
  const std::function<void(std::span<const int>)>& visit;
  std::vector<int> labels;
  std::vector<int> first;
  std::vector<int> last;

  void run(int i, int blocks) {
    if (i == n) {
      visit(std::span<const int>(labels.data(), labels.size()));
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      if (b < blocks && !admissible(i, b)) continue;
      labels[i] = b;
      int saved = last[b];
      if (b == blocks) first[b] = i;
      last[b] = i;
      run(i + 1, b == blocks ? blocks + 1 : blocks);
      last[b] = saved;
    }
  }

  bool admissible(int i, int b) const {
    switch (family) {
      case PartitionFamily::all: return true;
      case PartitionFamily::interval: return last[b] == i - 1;
      case PartitionFamily::noncrossing:
        for (int j = last[b] + 1; j < i; ++j)
          if (first[labels[j]] < last[b]) return false;
        return true;
    }
    return false;
  }
};

}  // namespace

void for_each_partition(int n, PartitionFamily family,
                        const std::function<void(std::span<const int>)>& visit, int max_n) {
  if (n < 1 || n > max_n)
    throw SizeLimitError("partition size " + std::to_string(n) + " outside 1.." + std::to_string(max_n) +
                         " (size limit " + std::to_string(max_n) + ")");
  Enumerator e{n, family, visit, std::vector<int>(n), std::vector<int>(n, -1), std::vector<int>(n, -1)};
  e.run(0, 0);
}

std::vector<Partition> enumerate_partitions(int n, PartitionFamily family, int max_n) {
  std::vector<Partition> out;
  for_each_partition(n, family, [&](std::span<const int> l) { out.push_back(Partition::from_labels(l)); }, max_n);
  return out;
}

std::size_t count_partitions(int n, PartitionFamily family, int max_n) {
  std::size_t c = 0;
  for_each_partition(n, family, [&](std::span<const int>) { ++c; }, max_n);
  return c;
}

namespace {
void same_size(const Partition& p, const Partition& q) {
  if (p.size() != q.size())
    throw DimensionError("partitions of different ground sets: " + std::to_string(p.size()) + " vs " +
                         std::to_string(q.size()));
}
}  // namespace

bool compare_leq(const Partition& p, const Partition& q) {
  same_size(p, q);
  auto lq = q.labels();
  for (const auto& b : p.blocks())
    for (int x : b)
      if (lq[x - 1] != lq[b.front() - 1]) return false;
  return true;
}

Partition join_partitions(const Partition& p, const Partition& q) {
  same_size(p, q);
  int n = p.size();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (const auto* part : {&p, &q})
    for (const auto& b : part->blocks())
      for (int x : b) parent[find(x - 1)] = find(b.front() - 1);
  std::vector<int> l(n);
  for (int i = 0; i < n; ++i) l[i] = find(i);
  return Partition::from_labels(l);
}

}  // namespace fck

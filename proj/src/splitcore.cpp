#include "spinweb/splitcore.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace spinweb::split {

BitVector::BitVector(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto b : bits_)
    if (b != 0 && b != 1) throw input_error("bit vector entries must be 0 or 1");
}

BitVector::BitVector(std::string_view text) {
  bits_.reserve(text.size());
  for (char c : text) {
    if (c == '0' || c == '1')
      bits_.push_back(static_cast<std::uint8_t>(c - '0'));
    else
      throw input_error(std::string("invalid bitstring character '") + c + "'");
  }
  if (bits_.empty()) throw input_error("empty bitstring");
}

std::size_t BitVector::popcount() const {
  return static_cast<std::size_t>(std::accumulate(bits_.begin(), bits_.end(), 0));
}

std::string BitVector::str() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
  return s;
}

namespace {

void check_common_length(const std::vector<BitVector>& v, std::size_t n) {
  for (const auto& b : v)
    if (b.size() != n)
      throw input_error("bit vectors of mixed lengths: expected " + std::to_string(n) +
                        ", got " + std::to_string(b.size()));
}

} // namespace

Splitting::Splitting(std::vector<BitVector> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) throw input_error("a splitting needs at least one element");
  n_ = elements_[0].size();
  check_common_length(elements_, n_);
  std::sort(elements_.begin(), elements_.end(), std::greater<>());
  if (!is_splitting(elements_, n_))
    throw input_error("element set is not a splitting (componentwise sum must be all-ones)");
}

bool is_splitting(const std::vector<BitVector>& v, std::size_t n) {
  check_common_length(v, n);
  std::vector<int> sum(n, 0);
  for (const auto& b : v) {
    if (b.popcount() == 0) return false;
    for (std::size_t i = 0; i < n; ++i) sum[i] += b[i];
  }
  return std::all_of(sum.begin(), sum.end(), [](int s) { return s == 1; });
}

RichReport rich_report(const OrderedTypeSet& v, std::size_t n) {
  check_common_length(v, n);
  RichReport rep;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      bool separated = false;
      for (const auto& b : v)
        if (b[i] != b[j]) { separated = true; break; }
      if (!separated) {
        rep.unseparated = {i, j};
        return rep;
      }
    }
  for (std::size_t i = 0; i < n; ++i) {
    bool covered = false;
    for (const auto& b : v)
      if (b[i] == 1) { covered = true; break; }
    if (!covered) {
      rep.uncovered = i;
      return rep;
    }
  }
  rep.rich = true;
  return rep;
}

bool is_rich(const OrderedTypeSet& v, std::size_t n) { return rich_report(v, n).rich; }

bool refines(const Splitting& coarse, const Splitting& fine) {
  if (coarse.n() != fine.n())
    throw input_error("splittings of different lengths cannot be compared");
  // Blocks of a splitting are disjoint, so v in `coarse` is a sum of
  // elements of `fine` iff every fine block is inside or outside v's support.
  for (const auto& v : coarse.elements()) {
    std::vector<int> covered(coarse.n(), 0);
    for (const auto& w : fine.elements()) {
      bool inside = true;
      for (std::size_t i = 0; i < coarse.n(); ++i)
        if (w[i] == 1 && v[i] == 0) { inside = false; break; }
      if (!inside) continue;
      for (std::size_t i = 0; i < coarse.n(); ++i)
        if (w[i] == 1) covered[i] = 1;
    }
    for (std::size_t i = 0; i < coarse.n(); ++i)
      if (v[i] == 1 && !covered[i]) return false;
  }
  return true;
}

SectionMap section_map(const Splitting& v) {
  SectionMap s;
  s.targets.resize(v.n());
  for (std::size_t i = 0; i < v.n(); ++i) {
    for (const auto& b : v.elements()) {
      if (b[i] != 1) continue;
      for (std::size_t j = 0; j < v.n(); ++j)
        if (b[j] == 1) { s.targets[i] = j; break; }
      break;
    }
  }
  return s;
}

Splitting max_splitting(std::size_t n) {
  if (n == 0) throw input_error("max_splitting needs n >= 1");
  std::vector<BitVector> elems;
  elems.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::uint8_t> bits(n, 0);
    bits[i] = 1;
    elems.emplace_back(std::move(bits));
  }
  return Splitting(std::move(elems));
}

OrderedTypeSet union_of(const std::vector<Splitting>& splittings) {
  std::set<BitVector, std::greater<>> acc;
  for (const auto& v : splittings)
    for (const auto& b : v.elements()) acc.insert(b);
  return OrderedTypeSet(acc.begin(), acc.end());
}

std::vector<std::vector<BitVector>> parse_bitvector_blocks(std::string_view text) {
  std::vector<std::vector<BitVector>> blocks;
  std::vector<BitVector> current;
  std::istringstream in{std::string(text)};
  std::string line;
  auto flush = [&] {
    if (!current.empty()) blocks.push_back(std::move(current));
    current.clear();
  };
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    current.emplace_back(line);
  }
  flush();
  return blocks;
}

} // namespace spinweb::split

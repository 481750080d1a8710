#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spinweb/errors.hpp"

namespace spinweb::split {

/// Fixed-length 0/1 vector.
class BitVector {
public:
  BitVector() = default;
  explicit BitVector(std::vector<std::uint8_t> bits);
  /// Parse from a bitstring like "1100".
  explicit BitVector(std::string_view text);

  std::size_t size() const { return bits_.size(); }
  int operator[](std::size_t i) const { return bits_[i]; }
  std::size_t popcount() const;
  std::string str() const;

  bool operator==(const BitVector& other) const = default;
  auto operator<=>(const BitVector& other) const = default;

private:
  std::vector<std::uint8_t> bits_;
};

/// Ordered set of distinct bit vectors of common length. Order matters for
/// richness bookkeeping; no partition condition is implied.
using OrderedTypeSet = std::vector<BitVector>;

/// Set of nonzero bit vectors whose componentwise sum is all-ones.
/// Elements are kept canonically sorted in descending lexicographic order,
/// so structural equality is set equality.
class Splitting {
public:
  Splitting() = default;
  /// Canonicalizes and validates; throws input_error if not a splitting.
  explicit Splitting(std::vector<BitVector> elements);

  const std::vector<BitVector>& elements() const { return elements_; }
  std::size_t n() const { return n_; }

  bool operator==(const Splitting& other) const = default;

private:
  std::vector<BitVector> elements_;
  std::size_t n_ = 0;
};

/// Index map i -> representative slot of i's block (0-based internally;
/// 1-based in all user-facing text).
struct SectionMap {
  std::vector<std::size_t> targets;
};

bool is_splitting(const std::vector<BitVector>& v, std::size_t n);

bool is_rich(const OrderedTypeSet& v, std::size_t n);

/// Richness with an explanation of the first failing condition.
struct RichReport {
  bool rich = false;
  std::optional<std::pair<std::size_t, std::size_t>> unseparated; // 0-based (i, j)
  std::optional<std::size_t> uncovered;                           // 0-based i
};
RichReport rich_report(const OrderedTypeSet& v, std::size_t n);

/// True iff every element of `coarse` is a componentwise sum of elements of
/// `fine`, i.e. `fine` refines `coarse`.
bool refines(const Splitting& coarse, const Splitting& fine);

SectionMap section_map(const Splitting& v);

Splitting max_splitting(std::size_t n);

template <typename T>
std::vector<T> project_tuple(const Splitting& v, const std::vector<T>& tuple) {
  if (tuple.size() != v.n()) throw input_error("tuple length does not match splitting length");
  const SectionMap s = section_map(v);
  std::vector<T> out;
  out.reserve(tuple.size());
  for (std::size_t i = 0; i < tuple.size(); ++i) out.push_back(tuple[s.targets[i]]);
  return out;
}

/// Splitting induced by equality classes of a tuple. Requires only
/// equality comparison on T.
template <typename T>
Splitting splitting_of_tuple(const std::vector<T>& tuple) {
  if (tuple.empty()) throw input_error("splitting of an empty tuple is undefined");
  std::vector<BitVector> elems;
  std::vector<bool> seen(tuple.size(), false);
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (seen[i]) continue;
    std::vector<std::uint8_t> bits(tuple.size(), 0);
    for (std::size_t j = i; j < tuple.size(); ++j)
      if (tuple[j] == tuple[i]) {
        bits[j] = 1;
        seen[j] = true;
      }
    elems.emplace_back(std::move(bits));
  }
  return Splitting(std::move(elems));
}

/// All elements of the given splittings, deduplicated, descending lex order.
OrderedTypeSet union_of(const std::vector<Splitting>& splittings);

/// Parse blocks of bitstring lines (blocks separated by blank lines).
std::vector<std::vector<BitVector>> parse_bitvector_blocks(std::string_view text);

} // namespace spinweb::split

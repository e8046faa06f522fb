#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rdm {

/// Bitset over entity indices with a cached cardinality. Bits past `size()`
/// are always zero, so word-level operations never need tail masking.
class SupportSet {
 public:
  SupportSet() = default;
  explicit SupportSet(std::size_t universe, bool filled = false);

  static SupportSet from_indices(std::size_t universe, std::span<const std::size_t> indices);
  static SupportSet from_words(std::size_t universe, std::vector<std::uint64_t> words);

  [[nodiscard]] std::size_t size() const noexcept { return universe_; }
  [[nodiscard]] std::size_t count() const noexcept { return count_; }
  [[nodiscard]] bool empty() const noexcept { return count_ == 0; }
  [[nodiscard]] std::size_t word_count() const noexcept { return words_.size(); }
  [[nodiscard]] std::span<const std::uint64_t> words() const noexcept { return words_; }

  [[nodiscard]] bool test(std::size_t i) const noexcept {
    return (words_[i >> 6] >> (i & 63)) & 1U;
  }
  void set(std::size_t i) noexcept;
  void reset(std::size_t i) noexcept;

  SupportSet& operator&=(const SupportSet& other);
  SupportSet& operator|=(const SupportSet& other);
  [[nodiscard]] SupportSet complement() const;
  /// Entities in *this but not in `other`.
  [[nodiscard]] SupportSet minus(const SupportSet& other) const;

  [[nodiscard]] std::size_t intersection_count(const SupportSet& other) const;
  [[nodiscard]] std::size_t union_count(const SupportSet& other) const;
  [[nodiscard]] std::size_t difference_count(const SupportSet& other) const;
  [[nodiscard]] bool is_subset_of(const SupportSet& other) const;

  [[nodiscard]] std::vector<std::size_t> indices() const;
  [[nodiscard]] std::uint64_t hash() const noexcept;

  friend bool operator==(const SupportSet& a, const SupportSet& b) noexcept {
    return a.universe_ == b.universe_ && a.count_ == b.count_ && a.words_ == b.words_;
  }

 private:
  void require_same_universe(const SupportSet& other) const;
  void recount() noexcept;

  std::size_t universe_ = 0;
  std::size_t count_ = 0;
  std::vector<std::uint64_t> words_;
};

[[nodiscard]] SupportSet operator&(SupportSet a, const SupportSet& b);
[[nodiscard]] SupportSet operator|(SupportSet a, const SupportSet& b);

}  // namespace rdm

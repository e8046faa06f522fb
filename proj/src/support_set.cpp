#include "rdm/support_set.hpp"

#include <bit>

#include "rdm/error.hpp"
#include "rdm/kernels.hpp"

namespace rdm {
namespace {

constexpr std::size_t words_for(std::size_t n) { return (n + 63) / 64; }

void clear_tail(std::vector<std::uint64_t>& words, std::size_t universe) {
  if (const std::size_t rem = universe & 63; rem != 0 && !words.empty()) {
    words.back() &= (std::uint64_t{1} << rem) - 1;
  }
}

}  // namespace

SupportSet::SupportSet(std::size_t universe, bool filled)
    : universe_(universe),
      count_(filled ? universe : 0),
      words_(words_for(universe), filled ? ~std::uint64_t{0} : 0) {
  clear_tail(words_, universe_);
}

SupportSet SupportSet::from_indices(std::size_t universe, std::span<const std::size_t> indices) {
  SupportSet s(universe);
  for (const std::size_t i : indices) {
    if (i >= universe) throw Error(Errc::UniverseMismatch, "entity index out of range");
    s.set(i);
  }
  return s;
}

SupportSet SupportSet::from_words(std::size_t universe, std::vector<std::uint64_t> words) {
  if (words.size() != words_for(universe)) {
    throw Error(Errc::UniverseMismatch, "word count does not match universe");
  }
  SupportSet s;
  s.universe_ = universe;
  s.words_ = std::move(words);
  clear_tail(s.words_, universe);
  s.recount();
  return s;
}

void SupportSet::set(std::size_t i) noexcept {
  std::uint64_t& w = words_[i >> 6];
  const std::uint64_t bit = std::uint64_t{1} << (i & 63);
  count_ += (w & bit) ? 0 : 1;
  w |= bit;
}

void SupportSet::reset(std::size_t i) noexcept {
  std::uint64_t& w = words_[i >> 6];
  const std::uint64_t bit = std::uint64_t{1} << (i & 63);
  count_ -= (w & bit) ? 1 : 0;
  w &= ~bit;
}

void SupportSet::require_same_universe(const SupportSet& other) const {
  if (universe_ != other.universe_) {
    throw Error(Errc::UniverseMismatch, "support sets over different entity universes");
  }
}

void SupportSet::recount() noexcept {
  count_ = kernels::active().popcount(words_.data(), words_.size());
}

SupportSet& SupportSet::operator&=(const SupportSet& other) {
  require_same_universe(other);
  kernels::active().and_inplace(words_.data(), other.words_.data(), words_.size());
  recount();
  return *this;
}

SupportSet& SupportSet::operator|=(const SupportSet& other) {
  require_same_universe(other);
  kernels::active().or_inplace(words_.data(), other.words_.data(), words_.size());
  recount();
  return *this;
}

SupportSet SupportSet::complement() const {
  SupportSet out = *this;
  for (auto& w : out.words_) w = ~w;
  clear_tail(out.words_, universe_);
  out.count_ = universe_ - count_;
  return out;
}

SupportSet SupportSet::minus(const SupportSet& other) const {
  require_same_universe(other);
  SupportSet out = *this;
  for (std::size_t i = 0; i < out.words_.size(); ++i) out.words_[i] &= ~other.words_[i];
  out.recount();
  return out;
}

std::size_t SupportSet::intersection_count(const SupportSet& other) const {
  require_same_universe(other);
  return kernels::active().and_count(words_.data(), other.words_.data(), words_.size());
}

std::size_t SupportSet::union_count(const SupportSet& other) const {
  require_same_universe(other);
  return kernels::active().or_count(words_.data(), other.words_.data(), words_.size());
}

std::size_t SupportSet::difference_count(const SupportSet& other) const {
  require_same_universe(other);
  return kernels::active().andnot_count(words_.data(), other.words_.data(), words_.size());
}

bool SupportSet::is_subset_of(const SupportSet& other) const {
  return difference_count(other) == 0;
}

std::vector<std::size_t> SupportSet::indices() const {
  std::vector<std::size_t> out;
  out.reserve(count_);
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t bits = words_[w];
    while (bits != 0) {
      out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
      bits &= bits - 1;
    }
  }
  return out;
}

std::uint64_t SupportSet::hash() const noexcept {
  // FNV-1a over words, mixed with the universe size.
  std::uint64_t h = 1469598103934665603ULL ^ universe_;
  for (const std::uint64_t w : words_) {
    h ^= w;
    h *= 1099511628211ULL;
    h ^= h >> 29;
  }
  return h;
}

SupportSet operator&(SupportSet a, const SupportSet& b) {
  a &= b;
  return a;
}

SupportSet operator|(SupportSet a, const SupportSet& b) {
  a |= b;
  return a;
}

}  // namespace rdm

#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "involute/rational.hpp"

namespace involute {

/// Exponent vector keying series terms. Ordering is graded lexicographic:
/// lower total degree first, ties broken by comparing exponents left to
/// right. This is also the canonical term order of series files.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t arity) : exps_(arity, 0) {}
  explicit MultiIndex(std::vector<unsigned> exps);
  MultiIndex(std::initializer_list<unsigned> exps) : MultiIndex(std::vector<unsigned>(exps)) {}

  std::size_t size() const noexcept { return exps_.size(); }
  unsigned degree() const noexcept { return degree_; }
  unsigned operator[](std::size_t i) const { return exps_[i]; }
  std::span<const unsigned> exponents() const noexcept { return exps_; }

  MultiIndex with(std::size_t i, unsigned value) const;
  MultiIndex operator+(const MultiIndex& other) const;
  /// Componentwise a <= b.
  bool divides(const MultiIndex& other) const;
  MultiIndex operator-(const MultiIndex& other) const;

  /// alpha! = prod alpha_i!
  Integer factorial() const;

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.exps_ == b.exps_; }
  friend bool operator<(const MultiIndex& a, const MultiIndex& b) {
    if (a.degree_ != b.degree_) return a.degree_ < b.degree_;
    return a.exps_ < b.exps_;
  }

 private:
  std::vector<unsigned> exps_;
  unsigned degree_ = 0;
};

/// All multi-indices of the given arity with total degree exactly `degree`,
/// in graded lexicographic order.
std::vector<MultiIndex> indices_of_degree(std::size_t arity, unsigned degree);

/// All multi-indices with total degree <= `max_degree`, graded lex order.
std::vector<MultiIndex> indices_up_to(std::size_t arity, unsigned max_degree);

}  // namespace involute

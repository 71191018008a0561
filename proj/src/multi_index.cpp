#include "involute/multi_index.hpp"

#include <numeric>

namespace involute {

MultiIndex::MultiIndex(std::vector<unsigned> exps)
    : exps_(std::move(exps)), degree_(std::accumulate(exps_.begin(), exps_.end(), 0u)) {}

MultiIndex MultiIndex::with(std::size_t i, unsigned value) const {
  MultiIndex r = *this;
  r.degree_ = r.degree_ - r.exps_[i] + value;
  r.exps_[i] = value;
  return r;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  MultiIndex r = *this;
  for (std::size_t i = 0; i < exps_.size(); ++i) r.exps_[i] += other.exps_[i];
  r.degree_ += other.degree_;
  return r;
}

bool MultiIndex::divides(const MultiIndex& other) const {
  for (std::size_t i = 0; i < exps_.size(); ++i)
    if (exps_[i] > other.exps_[i]) return false;
  return true;
}

MultiIndex MultiIndex::operator-(const MultiIndex& other) const {
  MultiIndex r = *this;
  for (std::size_t i = 0; i < exps_.size(); ++i) r.exps_[i] -= other.exps_[i];
  r.degree_ -= other.degree_;
  return r;
}

Integer MultiIndex::factorial() const {
  Integer r(1);
  for (unsigned e : exps_) r *= involute::factorial(e);
  return r;
}

namespace {

void fill_degree(std::size_t pos, unsigned remaining, std::vector<unsigned>& cur,
                 std::vector<MultiIndex>& out) {
  if (pos + 1 == cur.size()) {
    cur[pos] = remaining;
    out.emplace_back(cur);
    return;
  }
  // Larger leading exponents sort later under lexicographic comparison.
  for (unsigned e = 0; e <= remaining; ++e) {
    cur[pos] = e;
    fill_degree(pos + 1, remaining - e, cur, out);
  }
}

}  // namespace

std::vector<MultiIndex> indices_of_degree(std::size_t arity, unsigned degree) {
  std::vector<MultiIndex> out;
  if (arity == 0) {
    if (degree == 0) out.emplace_back(std::vector<unsigned>{});
    return out;
  }
  std::vector<unsigned> cur(arity, 0);
  fill_degree(0, degree, cur, out);
  return out;
}

std::vector<MultiIndex> indices_up_to(std::size_t arity, unsigned max_degree) {
  std::vector<MultiIndex> out;
  for (unsigned d = 0; d <= max_degree; ++d) {
    auto layer = indices_of_degree(arity, d);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

}  // namespace involute

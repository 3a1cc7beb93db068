#pragma once

#include <algorithm>
#include <vector>

#include "cosparse/types.hpp"

namespace cosparse {

// Index set of analysis rows declared to annihilate a signal, kept sorted and
// duplicate-free. `p` is the total number of rows of the operator the set
// refers to.
class Cosupport {
public:
  Cosupport() = default;

  Cosupport(Index p, std::vector<Index> rows) : p_(p), rows_(std::move(rows)) {
    require(p_ >= 0, "Cosupport: negative row count");
    std::sort(rows_.begin(), rows_.end());
    rows_.erase(std::unique(rows_.begin(), rows_.end()), rows_.end());
    for (Index r : rows_)
      require(r >= 0 && r < p_, "Cosupport: row index out of range");
  }

  static Cosupport full(Index p) {
    std::vector<Index> all(static_cast<size_t>(p));
    for (Index i = 0; i < p; ++i) all[static_cast<size_t>(i)] = i;
    return Cosupport(p, std::move(all));
  }

  static Cosupport empty(Index p) { return Cosupport(p, {}); }

  Index p() const { return p_; }
  Index size() const { return static_cast<Index>(rows_.size()); }
  const std::vector<Index>& rows() const { return rows_; }
  Index operator[](Index i) const { return rows_[static_cast<size_t>(i)]; }

  bool contains(Index r) const {
    return std::binary_search(rows_.begin(), rows_.end(), r);
  }

  Cosupport complement() const {
    std::vector<Index> out;
    out.reserve(static_cast<size_t>(p_ - size()));
    size_t k = 0;
    for (Index r = 0; r < p_; ++r) {
      if (k < rows_.size() && rows_[k] == r) {
        ++k;
      } else {
        out.push_back(r);
      }
    }
    return Cosupport(p_, std::move(out));
  }

  bool contains_all(const Cosupport& other) const {
    return std::includes(rows_.begin(), rows_.end(), other.rows_.begin(),
                         other.rows_.end());
  }

  bool operator==(const Cosupport& other) const {
    return p_ == other.p_ && rows_ == other.rows_;
  }

private:
  Index p_ = 0;
  std::vector<Index> rows_;
};

}  // namespace cosparse

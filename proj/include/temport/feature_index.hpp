#pragma once

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "temport/features.hpp"

namespace temport {

/// Interns feature-id strings to dense ints for fast weight lookup during
/// training and bulk decoding.
class FeatureIndex {
 public:
  int intern(std::string_view name) {
    auto it = ids_.find(name);
    if (it != ids_.end()) return it->second;
    int id = int(names_.size());
    names_.emplace_back(name);
    ids_.emplace(names_.back(), id);
    return id;
  }

  int find(std::string_view name) const {
    auto it = ids_.find(name);
    return it == ids_.end() ? -1 : it->second;
  }

  const std::string& name(int id) const { return names_[std::size_t(id)]; }
  int size() const { return int(names_.size()); }

 private:
  struct SvHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };
  struct SvEq {
    using is_transparent = void;
    bool operator()(std::string_view a, std::string_view b) const { return a == b; }
  };
  std::unordered_map<std::string, int, SvHash, SvEq> ids_;
  std::vector<std::string> names_;
};

/// Weight vector addressable both by feature string and by interned id.
/// Id -1 (unknown feature) reads as weight 0 everywhere.
class SparseWeights {
 public:
  double get(std::string_view name) const { return by_id(index_.find(name)); }

  void set(std::string_view name, double w) {
    int id = index_.intern(name);
    grow(id);
    dense_[std::size_t(id)] = w;
  }

  double by_id(int id) const {
    return id >= 0 && id < int(dense_.size()) ? dense_[std::size_t(id)] : 0.0;
  }

  void add_by_id(int id, double delta) {
    grow(id);
    dense_[std::size_t(id)] += delta;
  }

  void set_by_id(int id, double w) {
    grow(id);
    dense_[std::size_t(id)] = w;
  }

  /// Sum of weights at the given ids; -1 entries are skipped.
  double dot_ids(std::span<const int> ids) const {
    double sum = 0.0;
    for (int id : ids) {
      if (id >= 0 && id < int(dense_.size())) sum += dense_[std::size_t(id)];
    }
    return sum;
  }

  FeatureIndex& index() { return index_; }
  const FeatureIndex& index() const { return index_; }

  SparseVector to_sparse() const {
    SparseVector out;
    for (int id = 0; id < int(dense_.size()); ++id) {
      if (dense_[std::size_t(id)] != 0.0) out.set(index_.name(id), dense_[std::size_t(id)]);
    }
    return out;
  }

  void assign_from(const SparseVector& v) {
    dense_.assign(dense_.size(), 0.0);
    for (const auto& [name, w] : v) set(name, w);
  }

 private:
  void grow(int id) {
    if (id >= int(dense_.size())) dense_.resize(std::size_t(id) + 1, 0.0);
  }

  FeatureIndex index_;
  std::vector<double> dense_;
};

}  // namespace temport

#ifndef QLAB_PARTITION_HPP
#define QLAB_PARTITION_HPP

#include <string>
#include <vector>

#include "qlab/common.hpp"

namespace qlab {

// A tensor-product decomposition: ordered subsystem labels with their
// dimensions. Every state vector and operator carries one so that partial
// traces and embeddings always know which index slot belongs to which
// subsystem.
struct partition {
  std::vector<std::string> labels;
  std::vector<int> dims;

  partition() = default;
  partition(std::vector<std::string> labels_, std::vector<int> dims_);

  // Single-factor space.
  static partition single(const std::string& label, int dim);

  int factors() const { return static_cast<int>(dims.size()); }
  int total_dim() const;

  bool has_label(const std::string& label) const;
  int position(const std::string& label) const;  // throws if absent
  int dim_of(const std::string& label) const;

  // Concatenation for tensor products; rejects duplicate labels and enforces
  // the dimension cap.
  partition concat(const partition& other, int dim_cap = default_dim_cap) const;

  // Sub-partition of the given labels, kept in this partition's order.
  partition sub(const std::vector<std::string>& keep) const;

  // Mixed-radix index conversion between a flat index and one index per
  // factor (row-major: first factor varies slowest).
  std::vector<int> unpack(int flat) const;
  int pack(const std::vector<int>& multi) const;

  bool operator==(const partition& other) const {
    return labels == other.labels && dims == other.dims;
  }
};

}  // namespace qlab

#endif

#include "qlab/partition.hpp"

#include <algorithm>
#include <set>

namespace qlab {

partition::partition(std::vector<std::string> labels_, std::vector<int> dims_)
    : labels(std::move(labels_)), dims(std::move(dims_)) {
  if (labels.size() != dims.size())
    throw error("partition: label/dimension count mismatch");
  if (labels.empty()) throw error("partition: at least one factor required");
  std::set<std::string> seen;
  for (const auto& l : labels)
    if (!seen.insert(l).second)
      throw error("partition: duplicate label '" + l + "'");
  for (int d : dims)
    if (d < 1) throw error("partition: dimensions must be positive");
}

partition partition::single(const std::string& label, int dim) {
  return partition({label}, {dim});
}

int partition::total_dim() const {
  long long total = 1;
  for (int d : dims) total *= d;
  return static_cast<int>(total);
}

bool partition::has_label(const std::string& label) const {
  return std::find(labels.begin(), labels.end(), label) != labels.end();
}

int partition::position(const std::string& label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw error("partition: no such label '" + label + "'");
  return static_cast<int>(it - labels.begin());
}

int partition::dim_of(const std::string& label) const {
  return dims[position(label)];
}

partition partition::concat(const partition& other, int dim_cap) const {
  long long total = static_cast<long long>(total_dim()) * other.total_dim();
  if (total > dim_cap)
    throw error("tensor product dimension " + std::to_string(total) +
                " exceeds the configured cap " + std::to_string(dim_cap));
  std::vector<std::string> l = labels;
  l.insert(l.end(), other.labels.begin(), other.labels.end());
  std::vector<int> d = dims;
  d.insert(d.end(), other.dims.begin(), other.dims.end());
  return partition(std::move(l), std::move(d));
}

partition partition::sub(const std::vector<std::string>& keep) const {
  if (keep.empty()) throw error("partition: empty subsystem selection");
  std::set<std::string> want(keep.begin(), keep.end());
  if (want.size() != keep.size())
    throw error("partition: duplicate label in selection");
  std::vector<std::string> l;
  std::vector<int> d;
  for (int i = 0; i < factors(); ++i) {
    if (want.count(labels[i])) {
      l.push_back(labels[i]);
      d.push_back(dims[i]);
      want.erase(labels[i]);
    }
  }
  if (!want.empty())
    throw error("partition: label '" + *want.begin() + "' not in partition");
  return partition(std::move(l), std::move(d));
}

std::vector<int> partition::unpack(int flat) const {
  std::vector<int> multi(dims.size());
  for (int i = factors() - 1; i >= 0; --i) {
    multi[i] = flat % dims[i];
    flat /= dims[i];
  }
  return multi;
}

int partition::pack(const std::vector<int>& multi) const {
  if (static_cast<int>(multi.size()) != factors())
    throw error("partition: multi-index arity mismatch");
  int flat = 0;
  for (int i = 0; i < factors(); ++i) {
    if (multi[i] < 0 || multi[i] >= dims[i])
      throw error("partition: multi-index out of range");
    flat = flat * dims[i] + multi[i];
  }
  return flat;
}

}  // namespace qlab

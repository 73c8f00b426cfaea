#pragma once

#include <cstddef>
#include <initializer_list>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace aqec {

struct Mode {
  std::string name;
  int dim = 2;
};

// Ordered tensor factors. Factor 0 is the most significant index.
class HilbertLayout {
 public:
  HilbertLayout() = default;
  HilbertLayout(std::initializer_list<Mode> modes)
      : HilbertLayout(std::vector<Mode>(modes)) {}
  explicit HilbertLayout(std::vector<Mode> modes) : modes_(std::move(modes)) {
    std::set<std::string> seen;
    for (const auto& m : modes_) {
      if (m.dim < 2) {
        throw std::invalid_argument("HilbertLayout: mode '" + m.name +
                                    "' has dimension " + std::to_string(m.dim) +
                                    " (< 2)");
      }
      if (!seen.insert(m.name).second) {
        throw std::invalid_argument("HilbertLayout: duplicate mode '" + m.name +
                                    "'");
      }
    }
  }

  const std::vector<Mode>& modes() const { return modes_; }
  std::size_t size() const { return modes_.size(); }

  std::size_t index_of(const std::string& name) const {
    for (std::size_t i = 0; i < modes_.size(); ++i) {
      if (modes_[i].name == name) return i;
    }
    throw std::invalid_argument("HilbertLayout: unknown mode '" + name + "'");
  }

  bool contains(const std::string& name) const {
    for (const auto& m : modes_) {
      if (m.name == name) return true;
    }
    return false;
  }

  int dim_of(const std::string& name) const {
    return modes_[index_of(name)].dim;
  }

  std::size_t total_dim() const {
    std::size_t d = 1;
    for (const auto& m : modes_) d *= static_cast<std::size_t>(m.dim);
    return d;
  }

  // Flat index of a multi-index given in layout order.
  std::size_t flat_index(const std::vector<int>& digits) const {
    if (digits.size() != modes_.size()) {
      throw std::invalid_argument("HilbertLayout: expected " +
                                  std::to_string(modes_.size()) + " digits");
    }
    std::size_t idx = 0;
    for (std::size_t i = 0; i < modes_.size(); ++i) {
      if (digits[i] < 0 || digits[i] >= modes_[i].dim) {
        throw std::out_of_range("HilbertLayout: level " +
                                std::to_string(digits[i]) + " outside mode '" +
                                modes_[i].name + "'");
      }
      idx = idx * static_cast<std::size_t>(modes_[i].dim) +
            static_cast<std::size_t>(digits[i]);
    }
    return idx;
  }

  std::vector<int> digits(std::size_t flat) const {
    std::vector<int> out(modes_.size());
    for (std::size_t i = modes_.size(); i-- > 0;) {
      const auto d = static_cast<std::size_t>(modes_[i].dim);
      out[i] = static_cast<int>(flat % d);
      flat /= d;
    }
    return out;
  }

  // Sub-layout keeping the named modes in layout order.
  HilbertLayout restricted_to(const std::set<std::string>& keep) const {
    for (const auto& k : keep) index_of(k);
    std::vector<Mode> out;
    for (const auto& m : modes_) {
      if (keep.count(m.name)) out.push_back(m);
    }
    return HilbertLayout(std::move(out));
  }

  HilbertLayout without(const std::string& name) const {
    index_of(name);
    std::vector<Mode> out;
    for (const auto& m : modes_) {
      if (m.name != name) out.push_back(m);
    }
    return HilbertLayout(std::move(out));
  }

  bool operator==(const HilbertLayout& o) const {
    if (modes_.size() != o.modes_.size()) return false;
    for (std::size_t i = 0; i < modes_.size(); ++i) {
      if (modes_[i].name != o.modes_[i].name || modes_[i].dim != o.modes_[i].dim)
        return false;
    }
    return true;
  }

 private:
  std::vector<Mode> modes_;
};

}  // namespace aqec

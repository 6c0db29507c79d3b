#pragma once

#include <string>
#include <vector>

#include "pcc/code.hpp"
#include "pcc/features.hpp"

namespace pcc {

struct Example {
  SparseVector x;
  Code label = Code::NotCoded;
  std::string id;
};

/// Vectorized examples sharing one feature space.
struct Dataset {
  std::vector<Example> examples;
  std::vector<Code> classes;  ///< declaration order
  std::size_t dim = 0;

  /// Class set = distinct labels in declaration order.
  static Dataset from(std::vector<Example> examples, std::size_t dim);

  std::size_t size() const { return examples.size(); }
  bool empty() const { return examples.empty(); }
  std::size_t class_slot(Code c) const;  ///< position in `classes`

  /// Throws std::invalid_argument on: empty set, fewer than two classes, a
  /// class without instances, unknown labels, duplicate ids, entries out of
  /// range or non-finite weights.
  void validate_for_training() const;
};

}  // namespace pcc

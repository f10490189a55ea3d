#pragma once

#include <cmath>
#include <span>
#include <string>

#include "bladeinspect/dataset.hpp"
#include "bladeinspect/error.hpp"

namespace bladeinspect::detail {

inline void require_trainable(const LabeledDataset& data, const char* who) {
  if (data.size() == 0) throw InvalidArgument(std::string(who) + ": empty dataset");
  if (data.present_class_count() < 2) {
    throw InvalidArgument(std::string(who) + ": need at least two classes");
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (double v : data.row(i)) {
      if (!std::isfinite(v)) {
        throw InvalidArgument(std::string(who) + ": nonfinite feature in row " + data.id(i));
      }
    }
  }
}

inline void require_width(std::span<const double> x, std::size_t width, const char* who) {
  if (x.size() != width) {
    throw InvalidArgument(std::string(who) + ": expected " + std::to_string(width) +
                          " features, got " + std::to_string(x.size()));
  }
}

}  // namespace bladeinspect::detail

#pragma once

#include <cstddef>
#include <map>
#include <string>

namespace covrec {

/// One estimated moment. count == 0 marks an analytic (noise-free) value
/// with std_error 0; degenerate marks a record whose samples were all
/// identical, so the error estimate is 0 and not trustworthy.
struct Moment {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;
  bool degenerate = false;
};

/// First moments <x_k>, <y_k> for k = a,b (keys "a:x", "a:y", "b:x", "b:y")
/// and second moments <x^2> for every schedule token.
struct MomentSet {
  std::map<std::string, Moment> first;
  std::map<std::string, Moment> second;

  bool has_f_moments() const {
    return second.count("f:x") > 0 && second.count("f:y") > 0;
  }
};

}  // namespace covrec

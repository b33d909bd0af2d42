#pragma once

#include <string>
#include <vector>

namespace battn {

enum class Visibility : int { visible = 0, occluded = 1, missing = 2 };

struct Landmark {
  double x = 0.0;
  double y = 0.0;
  Visibility v = Visibility::visible;

  friend bool operator==(const Landmark&, const Landmark&) = default;
};

// One image's landmark annotation.
struct LandmarkSet {
  std::string image_id;
  std::vector<Landmark> points;

  friend bool operator==(const LandmarkSet&, const LandmarkSet&) = default;
};

}  // namespace battn

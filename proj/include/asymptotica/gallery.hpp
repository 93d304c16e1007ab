#pragma once

#include <map>
#include <string>
#include <vector>

#include "asymptotica/operator_model.hpp"

namespace asymptotica {

using GalleryParams = std::map<std::string, double>;

struct GalleryEntry {
  std::string name;
  std::string description;
  GalleryParams defaults;
};

const std::vector<GalleryEntry>& gallery_list();

// Build a named model. Unknown names raise UnknownGalleryEntry; unknown
// parameter keys raise PreconditionError.
OperatorModel gallery(const std::string& name, const GalleryParams& params = {});

}  // namespace asymptotica

#pragma once

#include "reeblab/surface.hpp"

namespace reeblab::testing {

// one default surface per test binary; construction is cheap but not free
inline const FuchsianSurface& default_surface() {
  static const FuchsianSurface surface = FuchsianSurface::build(FenchelNielsen{});
  return surface;
}

}  // namespace reeblab::testing

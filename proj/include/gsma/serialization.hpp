#pragma once

#include <string>
#include <vector>

#include "gsma/composite.hpp"
#include "gsma/pencil.hpp"

namespace gsma {

/// Writes E/A as Matrix Market files next to a JSON manifest at
/// <dir>/<name>.json and returns the manifest path.
std::string save_pencil(const std::string& dir, const std::string& name,
                        const ProjectionPencil& pencil,
                        const std::vector<std::string>& labels = {});

ProjectionPencil load_pencil(const std::string& manifest_path);

/// Composite models serialize as per-subsystem Matrix Market files plus the
/// J blocks, all referenced from one JSON manifest.
std::string save_composite(const std::string& dir, const std::string& name,
                           const CompositeModel& model);

CompositeModel load_composite(const std::string& manifest_path);

}  // namespace gsma

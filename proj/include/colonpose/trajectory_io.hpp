#pragma once

#include <string>
#include <vector>

#include "colonpose/pose.hpp"

namespace colonpose {

// Shared pose text format: one frame per line, 16 whitespace-separated
// decimal floats (row-major 4x4 world-from-camera, right-handed).
// Lines starting with '#' are comments.
std::vector<Pose> read_pose_file(const std::string& path);
void write_pose_file(const std::string& path, const std::vector<Pose>& poses);

}  // namespace colonpose

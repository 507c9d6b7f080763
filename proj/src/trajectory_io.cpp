#include "colonpose/trajectory_io.hpp"

#include <fstream>
#include <sstream>

namespace colonpose {

std::vector<Pose> read_pose_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open pose file: " + path);
  std::vector<Pose> poses;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    Eigen::Matrix4d m;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        if (!(ss >> m(r, c)))
          throw IoError(path + ":" + std::to_string(line_no) +
                        ": expected 16 floats per pose line");
    double extra;
    if (ss >> extra)
      throw IoError(path + ":" + std::to_string(line_no) + ": trailing data after 16 floats");
    poses.push_back(Pose::from_matrix(m));
  }
  return poses;
}

void write_pose_file(const std::string& path, const std::vector<Pose>& poses) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write pose file: " + path);
  out.precision(17);
  for (const Pose& p : poses) {
    const Eigen::Matrix4d m = p.matrix();
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) out << m(r, c) << (r == 3 && c == 3 ? '\n' : ' ');
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace colonpose

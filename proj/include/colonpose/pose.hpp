#pragma once

#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "colonpose/common.hpp"

namespace colonpose {

// Rigid world-from-camera transform. Units: centimeters.
struct Pose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  static Pose identity() { return {}; }
  static Pose translate(double x, double y, double z) {
    Pose p;
    p.translation = Eigen::Vector3d(x, y, z);
    return p;
  }
  static Pose rotate(const Eigen::Vector3d& axis, double angle_rad) {
    Pose p;
    p.rotation = Eigen::AngleAxisd(angle_rad, axis.normalized()).toRotationMatrix();
    return p;
  }
  static Pose rot_x_deg(double deg) { return rotate(Eigen::Vector3d::UnitX(), deg_to_rad(deg)); }
  static Pose rot_y_deg(double deg) { return rotate(Eigen::Vector3d::UnitY(), deg_to_rad(deg)); }
  static Pose rot_z_deg(double deg) { return rotate(Eigen::Vector3d::UnitZ(), deg_to_rad(deg)); }

  Eigen::Matrix4d matrix() const;
  static Pose from_matrix(const Eigen::Matrix4d& m);

  // orthonormality and det(+1), elementwise tolerance
  bool is_rigid(double tol = 1e-9) const;

  Eigen::Vector3d apply(const Eigen::Vector3d& point) const {
    return rotation * point + translation;
  }
};

// 6D relative pose: translation plus log of a unit quaternion.
// log(cos(t/2), sin(t/2) u) = (t/2) u, so |logq| <= pi/2 <= pi on the
// canonical (w >= 0) hemisphere.
struct RelPose6 {
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  Eigen::Vector3d logq = Eigen::Vector3d::Zero();

  Eigen::Matrix<double, 6, 1> as_vector() const {
    Eigen::Matrix<double, 6, 1> v;
    v << translation, logq;
    return v;
  }
  static RelPose6 from_vector(const Eigen::Matrix<double, 6, 1>& v) {
    return {v.head<3>(), v.tail<3>()};
  }
};

// Unit quaternion canonicalized to the w >= 0 hemisphere. For w == 0 the
// representative with first nonzero vector component positive is chosen.
struct UnitQuaternion {
  double w = 1, x = 0, y = 0, z = 0;

  static UnitQuaternion from_rotation(const Eigen::Matrix3d& r);
  Eigen::Matrix3d to_rotation() const;
  void canonicalize();
  double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }
};

struct Trajectory {
  std::vector<Pose> poses;
  std::vector<std::int64_t> frame_indices;

  std::size_t size() const { return poses.size(); }
  void validate() const;  // strictly increasing indices, matching lengths
};

Pose compose(const Pose& a, const Pose& b);
Pose invert(const Pose& p);

// relative(p1, p2) = p1^-1 * p2. Maps the pose of camera 1 onto camera 2
// (p2 = p1 * result) and, equivalently, point coordinates from frame 2 into
// frame 1. A positive z translation means camera 2 is in front of camera 1.
Pose relative(const Pose& p1, const Pose& p2);

RelPose6 to_6d(const Pose& p);
Pose from_6d(const RelPose6& r);

// Conjugation M * P * M with M = diag(1, -1, 1, 1); flips the handedness
// convention of the pose while keeping det(R) = +1. Involution.
Pose handedness_convert(const Pose& p);

// trajectory[0] = start, trajectory[i] = trajectory[i-1] * relatives[i-1]
Trajectory integrate(const Pose& start, const std::vector<Pose>& relatives);

// Geodesic rotation angle acos((trace(R)-1)/2) in degrees, in [0, 180].
// The trace argument is clamped to [-1, 1] to absorb round-off.
double rotation_angle_deg(const Pose& p);

}  // namespace colonpose

#include "colonpose/pose.hpp"

#include <cmath>

namespace colonpose {

Eigen::Matrix4d Pose::matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation;
  m.topRightCorner<3, 1>() = translation;
  return m;
}

Pose Pose::from_matrix(const Eigen::Matrix4d& m) {
  Pose p;
  p.rotation = m.topLeftCorner<3, 3>();
  p.translation = m.topRightCorner<3, 1>();
  return p;
}

bool Pose::is_rigid(double tol) const {
  const Eigen::Matrix3d rtr = rotation.transpose() * rotation;
  if (((rtr - Eigen::Matrix3d::Identity()).array().abs() > tol).any()) return false;
  return std::abs(rotation.determinant() - 1.0) <= tol;
}

void Trajectory::validate() const {
  if (poses.size() != frame_indices.size())
    throw NumericError("trajectory: poses and frame_indices lengths differ");
  for (std::size_t i = 1; i < frame_indices.size(); ++i)
    if (frame_indices[i] <= frame_indices[i - 1])
      throw NumericError("trajectory: frame indices not strictly increasing");
}

Pose compose(const Pose& a, const Pose& b) {
  Pose out;
  out.rotation = a.rotation * b.rotation;
  out.translation = a.rotation * b.translation + a.translation;
  return out;
}

Pose invert(const Pose& p) {
  Pose out;
  out.rotation = p.rotation.transpose();
  out.translation = -(out.rotation * p.translation);
  return out;
}

Pose relative(const Pose& p1, const Pose& p2) { return compose(invert(p1), p2); }

void UnitQuaternion::canonicalize() {
  const double n = norm();
  w /= n;
  x /= n;
  y /= n;
  z /= n;
  bool flip;
  if (std::abs(w) > 1e-12) {
    flip = w < 0;
  } else {
    // angle-pi tie break: first nonzero vector component positive
    if (std::abs(x) > 1e-12)
      flip = x < 0;
    else if (std::abs(y) > 1e-12)
      flip = y < 0;
    else
      flip = z < 0;
  }
  if (flip) {
    w = -w;
    x = -x;
    y = -y;
    z = -z;
  }
}

UnitQuaternion UnitQuaternion::from_rotation(const Eigen::Matrix3d& r) {
  const Eigen::Quaterniond q(r);
  UnitQuaternion out{q.w(), q.x(), q.y(), q.z()};
  out.canonicalize();
  return out;
}

Eigen::Matrix3d UnitQuaternion::to_rotation() const {
  return Eigen::Quaterniond(w, x, y, z).toRotationMatrix();
}

RelPose6 to_6d(const Pose& p) {
  const UnitQuaternion q = UnitQuaternion::from_rotation(p.rotation);
  RelPose6 out;
  out.translation = p.translation;
  const Eigen::Vector3d v(q.x, q.y, q.z);
  const double vn = v.norm();
  if (vn < 1e-15) {
    out.logq.setZero();
  } else {
    const double half_angle = std::atan2(vn, q.w);  // in [0, pi/2] for w >= 0
    out.logq = (half_angle / vn) * v;
  }
  return out;
}

Pose from_6d(const RelPose6& r) {
  Pose out;
  out.translation = r.translation;
  const double half_angle = r.logq.norm();
  if (half_angle < 1e-15) {
    out.rotation.setIdentity();
  } else {
    out.rotation =
        Eigen::AngleAxisd(2.0 * half_angle, r.logq / half_angle).toRotationMatrix();
  }
  return out;
}

Pose handedness_convert(const Pose& p) {
  const Eigen::DiagonalMatrix<double, 3> s(1, -1, 1);
  Pose out;
  out.rotation = s * p.rotation * s;
  out.translation = s * p.translation;
  return out;
}

Trajectory integrate(const Pose& start, const std::vector<Pose>& relatives) {
  Trajectory t;
  t.poses.reserve(relatives.size() + 1);
  t.frame_indices.reserve(relatives.size() + 1);
  t.poses.push_back(start);
  t.frame_indices.push_back(0);
  for (std::size_t i = 0; i < relatives.size(); ++i) {
    t.poses.push_back(compose(t.poses.back(), relatives[i]));
    t.frame_indices.push_back(static_cast<std::int64_t>(i + 1));
  }
  return t;
}

double rotation_angle_deg(const Pose& p) {
  const double c = std::clamp((p.rotation.trace() - 1.0) / 2.0, -1.0, 1.0);
  // cosines this close to 1 only arise from round-off on identity rotations
  if (c > 1.0 - 1e-12) return 0.0;
  return rad_to_deg(std::acos(c));
}

}  // namespace colonpose

#include "gsnav/camera.hpp"

#include <cmath>
#include <numbers>

#include "gsnav/errors.hpp"

namespace gsnav {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
}

CameraModel CameraModel::from_fov(int width, int height, double fov_x_deg) {
  if (width <= 0 || height <= 0) throw ArgumentError("camera size must be positive");
  if (!(fov_x_deg > 0.0 && fov_x_deg < 180.0)) throw ArgumentError("fov_x must lie in (0, 180)");
  CameraModel cam;
  cam.width = width;
  cam.height = height;
  cam.fx = width / (2.0 * std::tan(0.5 * fov_x_deg * kDegToRad));
  cam.fy = cam.fx;
  cam.cx = 0.5 * width;
  cam.cy = 0.5 * height;
  return cam;
}

double CameraModel::fov_x_deg() const { return 2.0 * std::atan(0.5 * width / fx) / kDegToRad; }

void CameraModel::validate() const {
  if (width <= 0 || height <= 0) throw ArgumentError("camera size must be positive");
  if (!(fx > 0.0 && fy > 0.0)) throw ArgumentError("camera focal lengths must be positive");
}

Pose Pose::look_at(const Eigen::Vector3d& eye, const Eigen::Vector3d& target,
                   const Eigen::Vector3d& up) {
  const Eigen::Vector3d forward = (target - eye).normalized();
  Eigen::Vector3d right = forward.cross(up);
  if (right.norm() < 1e-9) right = forward.unitOrthogonal();
  right.normalize();
  const Eigen::Vector3d down = forward.cross(right);
  Eigen::Matrix3d world_to_cam;
  world_to_cam.row(0) = right.transpose();
  world_to_cam.row(1) = down.transpose();
  world_to_cam.row(2) = forward.transpose();
  Pose pose;
  pose.rotation = Eigen::Quaterniond(world_to_cam).normalized();
  pose.translation = eye;
  return pose;
}

void Pose::validate() const {
  if (!rotation.coeffs().allFinite() || !translation.allFinite()) {
    throw ArgumentError("pose must be finite");
  }
  if (std::abs(rotation.norm() - 1.0) > 1e-6) throw ArgumentError("pose rotation must be unit");
}

Pose camera_pose_from_body(const Eigen::Quaterniond& body_to_world,
                           const Eigen::Vector3d& position, double mount_pitch_rad) {
  Eigen::Matrix3d cam_from_body;
  cam_from_body << 0, -1, 0,
                   0, 0, -1,
                   1, 0, 0;
  const Eigen::Matrix3d mount =
      Eigen::AngleAxisd(mount_pitch_rad, Eigen::Vector3d::UnitY()).toRotationMatrix();
  const Eigen::Matrix3d world_to_cam =
      cam_from_body * mount.transpose() * body_to_world.toRotationMatrix().transpose();
  Pose pose;
  pose.rotation = Eigen::Quaterniond(world_to_cam).normalized();
  pose.translation = position;
  return pose;
}

}  // namespace gsnav

#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace gsnav {

/// Pinhole intrinsics. Image coordinates put pixel (px, py)'s center at
/// (px + 0.5, py + 0.5); the principal point defaults to the image center.
struct CameraModel {
  int width = 80;
  int height = 60;
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;

  /// Square pixels: fy = fx = width / (2 tan(fov_x / 2)).
  static CameraModel from_fov(int width, int height, double fov_x_deg);
  double fov_x_deg() const;
  void validate() const;
};

/// World-to-camera rotation plus the camera center in world coordinates.
/// Camera axes follow the OpenCV convention: x right, y down, z forward.
struct Pose {
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  Eigen::Vector3d to_camera(const Eigen::Vector3d& world) const {
    return rotation * (world - translation);
  }

  /// Camera at `eye` looking at `target` with world `up` mapping to image-up.
  static Pose look_at(const Eigen::Vector3d& eye, const Eigen::Vector3d& target,
                      const Eigen::Vector3d& up = Eigen::Vector3d::UnitZ());
  void validate() const;
};

/// Camera pose for a body-mounted forward camera: optical axis along body +x
/// (body frame is x forward, y left, z up), pitched down by `mount_pitch_rad`.
Pose camera_pose_from_body(const Eigen::Quaterniond& body_to_world,
                           const Eigen::Vector3d& position, double mount_pitch_rad = 0.0);

}  // namespace gsnav

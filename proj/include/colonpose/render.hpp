#pragma once

#include "colonpose/camera.hpp"
#include "colonpose/scene.hpp"

namespace colonpose {

struct RenderResult {
  RgbImage rgb;
  DepthMap depth;
  // 1 where at least one light is blocked by the surface (test/diagnostic
  // aid; not part of the published dataset layout)
  ValidityMask shadow;
};

// Ray-cast one frame. Depth is z-depth (optical-axis distance) in cm to the
// first surface hit; rays that leave the open tube end are assigned exactly
// `far_cap` and shaded black. RGB is albedo times Lambertian shading from
// the two camera-attached lights with inverse-square falloff and a hard
// shadow test. Throws NumericError when the camera is not inside the tube.
RenderResult render_frame(const TubeScene& scene, const Pose& world_from_camera,
                          const Intrinsics& k, const LightRig& lights, double far_cap = 30.0,
                          Exec exec = Exec::parallel);

}  // namespace colonpose

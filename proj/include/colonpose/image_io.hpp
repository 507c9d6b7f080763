#pragma once

#include <string>

#include "colonpose/camera.hpp"

namespace colonpose {

// Binary PPM (P6), 8-bit. Values are clamped to [0,1] and rounded.
void write_ppm(const std::string& path, const RgbImage& img);
RgbImage read_ppm(const std::string& path);

// PFM, float32, scale header -1.0 (little-endian), rows bottom-up.
// "Pf" for depth maps, "PF" for lossless RGB dumps.
void write_pfm(const std::string& path, const DepthMap& depth);
DepthMap read_pfm(const std::string& path);
void write_pfm_rgb(const std::string& path, const RgbImage& img);
RgbImage read_pfm_rgb(const std::string& path);

}  // namespace colonpose

#include "colonpose/image_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

namespace colonpose {

namespace {

static_assert(std::endian::native == std::endian::little,
              "PFM writer assumes a little-endian host");

std::uint8_t quantize(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

void skip_ws_and_comments(std::istream& in) {
  for (;;) {
    int c = in.peek();
    if (c == '#') {
      std::string dummy;
      std::getline(in, dummy);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

}  // namespace

void write_ppm(const std::string& path, const RgbImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << "P6\n" << img.width << " " << img.height << "\n255\n";
  std::vector<std::uint8_t> row(static_cast<std::size_t>(img.width) * 3);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x)
      for (int c = 0; c < 3; ++c) row[x * 3 + c] = quantize(img.at(y, x, c));
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
  if (!out) throw IoError("write failed: " + path);
}

RgbImage read_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string magic;
  in >> magic;
  if (magic != "P6") throw IoError(path + ": not a P6 PPM");
  skip_ws_and_comments(in);
  int w, h, maxval;
  in >> w;
  skip_ws_and_comments(in);
  in >> h;
  skip_ws_and_comments(in);
  in >> maxval;
  if (!in || w <= 0 || h <= 0 || maxval != 255) throw IoError(path + ": bad PPM header");
  in.get();  // single whitespace after maxval
  RgbImage img(w, h);
  std::vector<std::uint8_t> raw(static_cast<std::size_t>(w) * h * 3);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!in) throw IoError(path + ": truncated PPM payload");
  for (std::size_t i = 0; i < raw.size(); ++i) img.data[i] = raw[i] / 255.0;
  return img;
}

namespace {

void write_pfm_payload(std::ofstream& out, const std::vector<double>& data, int width, int height,
                       int channels) {
  // PFM stores rows bottom-up
  std::vector<float> row(static_cast<std::size_t>(width) * channels);
  for (int y = height - 1; y >= 0; --y) {
    const double* src = data.data() + static_cast<std::size_t>(y) * width * channels;
    for (std::size_t i = 0; i < row.size(); ++i) row[i] = static_cast<float>(src[i]);
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(float)));
  }
}

void read_pfm_header(std::ifstream& in, const std::string& path, const char* magic, int& w,
                     int& h) {
  std::string m;
  in >> m;
  if (m != magic) throw IoError(path + ": expected " + magic + " PFM");
  double scale;
  in >> w >> h >> scale;
  if (!in || w <= 0 || h <= 0) throw IoError(path + ": bad PFM header");
  if (scale >= 0) throw IoError(path + ": big-endian PFM not supported");
  in.get();
}

void read_pfm_payload(std::ifstream& in, const std::string& path, std::vector<double>& data,
                      int width, int height, int channels) {
  std::vector<float> row(static_cast<std::size_t>(width) * channels);
  for (int y = height - 1; y >= 0; --y) {
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(row.size() * sizeof(float)));
    if (!in) throw IoError(path + ": truncated PFM payload");
    double* dst = data.data() + static_cast<std::size_t>(y) * width * channels;
    for (std::size_t i = 0; i < row.size(); ++i) dst[i] = row[i];
  }
}

}  // namespace

void write_pfm(const std::string& path, const DepthMap& depth) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << "Pf\n" << depth.width << " " << depth.height << "\n-1.0\n";
  write_pfm_payload(out, depth.data, depth.width, depth.height, 1);
  if (!out) throw IoError("write failed: " + path);
}

DepthMap read_pfm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  int w, h;
  read_pfm_header(in, path, "Pf", w, h);
  DepthMap depth(w, h);
  read_pfm_payload(in, path, depth.data, w, h, 1);
  return depth;
}

void write_pfm_rgb(const std::string& path, const RgbImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << "PF\n" << img.width << " " << img.height << "\n-1.0\n";
  write_pfm_payload(out, img.data, img.width, img.height, 3);
  if (!out) throw IoError("write failed: " + path);
}

RgbImage read_pfm_rgb(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  int w, h;
  read_pfm_header(in, path, "PF", w, h);
  RgbImage img(w, h);
  read_pfm_payload(in, path, img.data, w, h, 3);
  return img;
}

}  // namespace colonpose

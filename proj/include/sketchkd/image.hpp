#ifndef SKETCHKD_IMAGE_HPP_
#define SKETCHKD_IMAGE_HPP_

#include <array>
#include <string>
#include <vector>

#include "sketchkd/common.hpp"

namespace sketchkd {

// Square RGB image, values in [0,1], row-major (y, x, channel).
struct Image {
  int h = 0;
  int w = 0;
  std::vector<double> px;

  Image() = default;
  Image(int height, int width, double fill = 0.0)
      : h(height), w(width), px(static_cast<std::size_t>(height) * width * 3, fill) {}

  double& at(int y, int x, int c) { return px[(static_cast<std::size_t>(y) * w + x) * 3 + c]; }
  double at(int y, int x, int c) const { return px[(static_cast<std::size_t>(y) * w + x) * 3 + c]; }

  bool same_shape(const Image& o) const { return h == o.h && w == o.w; }

  void clip() {
    for (double& v : px) v = std::min(1.0, std::max(0.0, v));
  }
};

// 8-bit RGB PNG round trip (values are quantized to 255 levels on save).
void save_png(const Image& img, const std::string& path);
Image load_png(const std::string& path);

Image resize_bilinear(const Image& img, int out_h, int out_w);

// 3x3 homography acting on pixel coordinates (x, y, 1).
using Homography = std::array<double, 9>;

Homography identity_homography();
Homography rotation_about_center(double angle_rad, double cx, double cy);
// Maps the four source corners (tl, tr, br, bl order) to displaced positions.
Homography perspective_from_corner_shifts(int h, int w,
                                          const std::array<double, 8>& shifts);
Homography compose(const Homography& a, const Homography& b);

// Inverse-maps through `h_fwd` with bilinear sampling; samples outside the
// source are filled with `fill` (per channel).
Image warp_homography(const Image& img, const Homography& h_fwd,
                      const std::array<double, 3>& fill);

std::array<double, 3> border_mean_color(const Image& img);
double mean_intensity(const Image& img);

}  // namespace sketchkd

#endif  // SKETCHKD_IMAGE_HPP_

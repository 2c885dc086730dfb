#include "sketchkd/image.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <memory>

namespace sketchkd {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

unsigned char to_u8(double v) {
  double c = std::min(1.0, std::max(0.0, v));
  return static_cast<unsigned char>(std::lround(c * 255.0));
}

// Solves A x = b for an 8x8 system by Gaussian elimination with partial
// pivoting; used for the 4-point homography fit.
void solve8(double a[8][8], double b[8], double x[8]) {
  int perm[8];
  for (int i = 0; i < 8; ++i) perm[i] = i;
  for (int col = 0; col < 8; ++col) {
    int piv = col;
    for (int r = col + 1; r < 8; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    require(std::abs(a[piv][col]) > 1e-12, "degenerate homography system");
    if (piv != col) {
      for (int c = 0; c < 8; ++c) std::swap(a[col][c], a[piv][c]);
      std::swap(b[col], b[piv]);
    }
    for (int r = col + 1; r < 8; ++r) {
      double f = a[r][col] / a[col][col];
      for (int c = col; c < 8; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  for (int r = 7; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < 8; ++c) s -= a[r][c] * x[c];
    x[r] = s / a[r][r];
  }
}

Homography invert(const Homography& m) {
  double det = m[0] * (m[4] * m[8] - m[5] * m[7]) -
               m[1] * (m[3] * m[8] - m[5] * m[6]) +
               m[2] * (m[3] * m[7] - m[4] * m[6]);
  require(std::abs(det) > 1e-15, "singular homography");
  double inv = 1.0 / det;
  return Homography{
      (m[4] * m[8] - m[5] * m[7]) * inv, (m[2] * m[7] - m[1] * m[8]) * inv,
      (m[1] * m[5] - m[2] * m[4]) * inv, (m[5] * m[6] - m[3] * m[8]) * inv,
      (m[0] * m[8] - m[2] * m[6]) * inv, (m[2] * m[3] - m[0] * m[5]) * inv,
      (m[3] * m[7] - m[4] * m[6]) * inv, (m[1] * m[6] - m[0] * m[7]) * inv,
      (m[0] * m[4] - m[1] * m[3]) * inv};
}

bool is_identity(const Homography& m) {
  const Homography id = identity_homography();
  for (int i = 0; i < 9; ++i)
    if (m[i] != id[i]) return false;
  return true;
}

}  // namespace

void save_png(const Image& img, const std::string& path) {
  require(img.h > 0 && img.w > 0, "save_png: empty image");
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  require(fp != nullptr, "save_png: cannot open ", path);

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  require(png, "save_png: png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    fail("save_png: png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail("save_png: libpng error while writing ", path);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, img.w, img.h, 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  std::vector<unsigned char> row(static_cast<std::size_t>(img.w) * 3);
  for (int y = 0; y < img.h; ++y) {
    for (int x = 0; x < img.w; ++x)
      for (int c = 0; c < 3; ++c) row[static_cast<std::size_t>(x) * 3 + c] = to_u8(img.at(y, x, c));
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

Image load_png(const std::string& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  require(fp != nullptr, "load_png: cannot open ", path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  require(png, "load_png: png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    fail("load_png: png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail("load_png: libpng error while reading ", path);
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);

  png_uint_32 w = png_get_image_width(png, info);
  png_uint_32 h = png_get_image_height(png, info);
  int bit_depth = png_get_bit_depth(png, info);
  int color_type = png_get_color_type(png, info);

  // Normalize everything to 8-bit RGB.
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (bit_depth == 16) png_set_strip_16(png);
  if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
    png_set_gray_to_rgb(png);
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);

  Image img(static_cast<int>(h), static_cast<int>(w));
  std::vector<unsigned char> row(static_cast<std::size_t>(w) * 3);
  for (png_uint_32 y = 0; y < h; ++y) {
    png_read_row(png, row.data(), nullptr);
    for (png_uint_32 x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c)
        img.at(static_cast<int>(y), static_cast<int>(x), c) =
            row[static_cast<std::size_t>(x) * 3 + c] / 255.0;
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

Image resize_bilinear(const Image& img, int out_h, int out_w) {
  if (img.h == out_h && img.w == out_w) return img;
  Image out(out_h, out_w);
  const double sy = static_cast<double>(img.h) / out_h;
  const double sx = static_cast<double>(img.w) / out_w;
  for (int y = 0; y < out_h; ++y) {
    double fy = (y + 0.5) * sy - 0.5;
    int y0 = static_cast<int>(std::floor(fy));
    double wy = fy - y0;
    int y0c = std::min(std::max(y0, 0), img.h - 1);
    int y1c = std::min(std::max(y0 + 1, 0), img.h - 1);
    for (int x = 0; x < out_w; ++x) {
      double fx = (x + 0.5) * sx - 0.5;
      int x0 = static_cast<int>(std::floor(fx));
      double wx = fx - x0;
      int x0c = std::min(std::max(x0, 0), img.w - 1);
      int x1c = std::min(std::max(x0 + 1, 0), img.w - 1);
      for (int c = 0; c < 3; ++c) {
        double top = img.at(y0c, x0c, c) * (1 - wx) + img.at(y0c, x1c, c) * wx;
        double bot = img.at(y1c, x0c, c) * (1 - wx) + img.at(y1c, x1c, c) * wx;
        out.at(y, x, c) = top * (1 - wy) + bot * wy;
      }
    }
  }
  return out;
}

Homography identity_homography() { return Homography{1, 0, 0, 0, 1, 0, 0, 0, 1}; }

Homography rotation_about_center(double angle_rad, double cx, double cy) {
  if (angle_rad == 0.0) return identity_homography();
  double c = std::cos(angle_rad), s = std::sin(angle_rad);
  // T(c) * R * T(-c)
  return Homography{c, -s, cx - c * cx + s * cy,
                    s, c,  cy - s * cx - c * cy,
                    0, 0,  1};
}

Homography perspective_from_corner_shifts(int h, int w,
                                          const std::array<double, 8>& shifts) {
  bool all_zero = true;
  for (double v : shifts)
    if (v != 0.0) all_zero = false;
  if (all_zero) return identity_homography();

  const double src[4][2] = {{0, 0},
                            {static_cast<double>(w - 1), 0},
                            {static_cast<double>(w - 1), static_cast<double>(h - 1)},
                            {0, static_cast<double>(h - 1)}};
  double dst[4][2];
  for (int i = 0; i < 4; ++i) {
    dst[i][0] = src[i][0] + shifts[static_cast<std::size_t>(i) * 2];
    dst[i][1] = src[i][1] + shifts[static_cast<std::size_t>(i) * 2 + 1];
  }
  // Standard DLT rows for x' and y' with h22 = 1.
  double a[8][8] = {};
  double b[8] = {};
  for (int i = 0; i < 4; ++i) {
    double x = src[i][0], y = src[i][1];
    double xp = dst[i][0], yp = dst[i][1];
    double* r0 = a[i * 2];
    r0[0] = x; r0[1] = y; r0[2] = 1; r0[6] = -x * xp; r0[7] = -y * xp;
    b[i * 2] = xp;
    double* r1 = a[i * 2 + 1];
    r1[3] = x; r1[4] = y; r1[5] = 1; r1[6] = -x * yp; r1[7] = -y * yp;
    b[i * 2 + 1] = yp;
  }
  double x[8];
  solve8(a, b, x);
  return Homography{x[0], x[1], x[2], x[3], x[4], x[5], x[6], x[7], 1.0};
}

Homography compose(const Homography& a, const Homography& b) {
  if (is_identity(a)) return b;
  if (is_identity(b)) return a;
  Homography m{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0;
      for (int k = 0; k < 3; ++k) s += a[static_cast<std::size_t>(i) * 3 + k] * b[static_cast<std::size_t>(k) * 3 + j];
      m[static_cast<std::size_t>(i) * 3 + j] = s;
    }
  return m;
}

Image warp_homography(const Image& img, const Homography& h_fwd,
                      const std::array<double, 3>& fill) {
  if (is_identity(h_fwd)) return img;
  Homography inv = invert(h_fwd);
  Image out(img.h, img.w);
  for (int y = 0; y < img.h; ++y) {
    for (int x = 0; x < img.w; ++x) {
      double wz = inv[6] * x + inv[7] * y + inv[8];
      double sx = (inv[0] * x + inv[1] * y + inv[2]) / wz;
      double sy = (inv[3] * x + inv[4] * y + inv[5]) / wz;
      if (sx < 0.0 || sy < 0.0 || sx > img.w - 1.0 || sy > img.h - 1.0) {
        for (int c = 0; c < 3; ++c) out.at(y, x, c) = fill[static_cast<std::size_t>(c)];
        continue;
      }
      int x0 = static_cast<int>(std::floor(sx));
      int y0 = static_cast<int>(std::floor(sy));
      int x1 = std::min(x0 + 1, img.w - 1);
      int y1 = std::min(y0 + 1, img.h - 1);
      double fx = sx - x0, fy = sy - y0;
      for (int c = 0; c < 3; ++c) {
        double top = img.at(y0, x0, c) * (1 - fx) + img.at(y0, x1, c) * fx;
        double bot = img.at(y1, x0, c) * (1 - fx) + img.at(y1, x1, c) * fx;
        out.at(y, x, c) = top * (1 - fy) + bot * fy;
      }
    }
  }
  return out;
}

std::array<double, 3> border_mean_color(const Image& img) {
  std::array<double, 3> acc{0, 0, 0};
  int n = 0;
  for (int x = 0; x < img.w; ++x) {
    for (int c = 0; c < 3; ++c) {
      acc[static_cast<std::size_t>(c)] += img.at(0, x, c) + img.at(img.h - 1, x, c);
    }
    n += 2;
  }
  for (int y = 1; y < img.h - 1; ++y) {
    for (int c = 0; c < 3; ++c) {
      acc[static_cast<std::size_t>(c)] += img.at(y, 0, c) + img.at(y, img.w - 1, c);
    }
    n += 2;
  }
  for (double& v : acc) v /= n;
  return acc;
}

double mean_intensity(const Image& img) {
  double s = 0;
  for (double v : img.px) s += v;
  return s / img.px.size();
}

}  // namespace sketchkd

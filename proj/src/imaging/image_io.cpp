#include "orchid/error.hpp"
#include "orchid/imaging.hpp"

#include <fstream>
#include <iterator>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

namespace orchid {
namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::Io, "read failed for " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

cv::Mat decode_raw(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) throw Error(ErrorCode::Decode, "empty image payload");
  cv::Mat buffer(1, static_cast<int>(bytes.size()), CV_8UC1,
                 const_cast<std::uint8_t*>(bytes.data()));
  cv::Mat decoded;
  try {
    decoded = cv::imdecode(buffer, cv::IMREAD_UNCHANGED);
  } catch (const cv::Exception& e) {
    throw Error(ErrorCode::Decode, e.what());
  }
  if (decoded.empty()) throw Error(ErrorCode::Decode, "unsupported or corrupt image data");
  if (decoded.depth() == CV_16U) decoded.convertTo(decoded, CV_8U, 1.0 / 257.0);
  if (decoded.depth() != CV_8U) throw Error(ErrorCode::Decode, "unsupported sample depth");
  return decoded;
}

std::vector<std::uint8_t> encode(const cv::Mat& mat) {
  std::vector<std::uint8_t> out;
  if (!cv::imencode(".png", mat, out)) throw Error(ErrorCode::Io, "PNG encoding failed");
  return out;
}

}  // namespace

RgbImage decode_image(std::span<const std::uint8_t> bytes) {
  cv::Mat m = decode_raw(bytes);
  RgbImage img(m.cols, m.rows);
  const int channels = m.channels();
  for (int y = 0; y < m.rows; ++y) {
    const std::uint8_t* row = m.ptr<std::uint8_t>(y);
    for (int x = 0; x < m.cols; ++x) {
      const std::uint8_t* px = row + static_cast<std::ptrdiff_t>(x) * channels;
      Rgb out;
      switch (channels) {
        case 1:
          out = {px[0], px[0], px[0]};
          break;
        case 2: {  // gray + alpha, composited over black
          auto v = static_cast<std::uint8_t>((px[0] * px[1] + 127) / 255);
          out = {v, v, v};
          break;
        }
        case 3:
          out = {px[2], px[1], px[0]};
          break;
        default: {
          const int a = px[3];
          out = {static_cast<std::uint8_t>((px[2] * a + 127) / 255),
                 static_cast<std::uint8_t>((px[1] * a + 127) / 255),
                 static_cast<std::uint8_t>((px[0] * a + 127) / 255)};
        }
      }
      img.at(x, y) = out;
    }
  }
  return img;
}

RgbImage load_image(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::Io, "no such file " + path.string());
  return decode_image(read_file(path));
}

std::vector<std::uint8_t> encode_png(const RgbImage& img) {
  cv::Mat m(img.height(), img.width(), CV_8UC3);
  for (int y = 0; y < img.height(); ++y) {
    auto* row = m.ptr<std::uint8_t>(y);
    for (int x = 0; x < img.width(); ++x) {
      const Rgb p = img.at(x, y);
      row[3 * x] = p.b;
      row[3 * x + 1] = p.g;
      row[3 * x + 2] = p.r;
    }
  }
  return encode(m);
}

void save_png(const RgbImage& img, const std::filesystem::path& path) {
  write_file(path, encode_png(img));
}

BinaryMask load_mask(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::Io, "no such file " + path.string());
  const RgbImage gray = decode_image(read_file(path));
  BinaryMask mask(gray.width(), gray.height());
  for (int y = 0; y < gray.height(); ++y) {
    for (int x = 0; x < gray.width(); ++x) {
      const Rgb p = gray.at(x, y);
      if (p.r != 0 || p.g != 0 || p.b != 0) mask.set(x, y);
    }
  }
  return mask;
}

std::vector<std::uint8_t> encode_mask_png(const BinaryMask& mask) {
  cv::Mat m(mask.height(), mask.width(), CV_8UC1);
  for (int y = 0; y < mask.height(); ++y) {
    auto* row = m.ptr<std::uint8_t>(y);
    for (int x = 0; x < mask.width(); ++x) row[x] = mask.at(x, y) ? 255 : 0;
  }
  return encode(m);
}

void save_mask_png(const BinaryMask& mask, const std::filesystem::path& path) {
  write_file(path, encode_mask_png(mask));
}

}  // namespace orchid

#include "posekit/image.hpp"

#include <cstring>
#include <fstream>

#include <zlib.h>

#include "posekit/error.hpp"

namespace posekit {

Image Image::filled(std::uint32_t w, std::uint32_t h, std::uint8_t r, std::uint8_t g,
                    std::uint8_t b) {
  Image img;
  img.width = w;
  img.height = h;
  img.rgb.resize(static_cast<std::size_t>(w) * h * 3);
  for (std::size_t i = 0; i < img.rgb.size(); i += 3) {
    img.rgb[i] = r;
    img.rgb[i + 1] = g;
    img.rgb[i + 2] = b;
  }
  return img;
}

namespace {

void put_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xFF));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

void put_chunk(std::vector<std::uint8_t>& out, const char type[4],
               const std::uint8_t* data, std::size_t len) {
  put_u32_be(out, static_cast<std::uint32_t>(len));
  const std::size_t start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data, data + len);
  const auto crc = static_cast<std::uint32_t>(
      crc32(0, out.data() + start, static_cast<uInt>(4 + len)));
  put_u32_be(out, crc);
}

void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("error writing " + path);
}

} // namespace

std::vector<std::uint8_t> encode_png(const Image& image) {
  if (image.width == 0 || image.height == 0) throw ValueError("cannot encode an empty image");
  if (image.rgb.size() != static_cast<std::size_t>(image.width) * image.height * 3) {
    throw ValueError("image buffer does not match its extents");
  }

  // Scanlines with filter byte 0 (none), zlib-compressed into one IDAT.
  const std::size_t row = static_cast<std::size_t>(image.width) * 3;
  std::vector<std::uint8_t> raw((row + 1) * image.height);
  for (std::uint32_t y = 0; y < image.height; ++y) {
    raw[y * (row + 1)] = 0;
    std::memcpy(raw.data() + y * (row + 1) + 1, image.rgb.data() + y * row, row);
  }
  uLongf dest_len = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> compressed(dest_len);
  if (compress2(compressed.data(), &dest_len, raw.data(), static_cast<uLong>(raw.size()),
                6) != Z_OK) {
    throw PoseError("zlib compression failed");
  }
  compressed.resize(dest_len);

  std::vector<std::uint8_t> out;
  out.reserve(compressed.size() + 64);
  const std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  out.insert(out.end(), sig, sig + 8);

  std::vector<std::uint8_t> ihdr;
  put_u32_be(ihdr, image.width);
  put_u32_be(ihdr, image.height);
  ihdr.push_back(8);   // bit depth
  ihdr.push_back(2);   // truecolor
  ihdr.push_back(0);   // compression
  ihdr.push_back(0);   // filter
  ihdr.push_back(0);   // interlace
  put_chunk(out, "IHDR", ihdr.data(), ihdr.size());
  put_chunk(out, "IDAT", compressed.data(), compressed.size());
  put_chunk(out, "IEND", nullptr, 0);
  return out;
}

void write_png_file(const std::string& path, const Image& image) {
  write_bytes(path, encode_png(image));
}

void write_gif_file(const std::string& path, std::span<const Image> frames, int delay_cs) {
  write_bytes(path, encode_gif(frames, delay_cs));
}

} // namespace posekit

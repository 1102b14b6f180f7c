#include <algorithm>
#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "posekit/error.hpp"
#include "posekit/image.hpp"

// GIF89a writer: global palette from the first frame, NETSCAPE infinite loop,
// one full-canvas image per frame, standard LZW with clear-code resets.
namespace posekit {

namespace {

constexpr int kMaxLzwCode = 4095;

struct Palette {
  std::vector<std::array<std::uint8_t, 3>> colors;
  std::unordered_map<std::uint32_t, std::uint8_t> exact;

  static std::uint32_t key(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    return (static_cast<std::uint32_t>(r) << 16) | (static_cast<std::uint32_t>(g) << 8) | b;
  }

  std::uint8_t index_of(std::uint8_t r, std::uint8_t g, std::uint8_t b) const {
    if (const auto it = exact.find(key(r, g, b)); it != exact.end()) return it->second;
    // Nearest entry, lowest index on ties.
    std::size_t best = 0;
    long best_d = 1L << 30;
    for (std::size_t i = 0; i < colors.size(); ++i) {
      const long dr = static_cast<long>(colors[i][0]) - r;
      const long dg = static_cast<long>(colors[i][1]) - g;
      const long db = static_cast<long>(colors[i][2]) - b;
      const long d = dr * dr + dg * dg + db * db;
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    return static_cast<std::uint8_t>(best);
  }
};

// First-frame colors in scan order; a fixed 6x7x6 cube when they overflow 256.
Palette build_palette(const Image& first) {
  Palette p;
  for (std::size_t i = 0; i < first.rgb.size(); i += 3) {
    const std::uint32_t k = Palette::key(first.rgb[i], first.rgb[i + 1], first.rgb[i + 2]);
    if (p.exact.emplace(k, static_cast<std::uint8_t>(p.colors.size())).second) {
      p.colors.push_back({first.rgb[i], first.rgb[i + 1], first.rgb[i + 2]});
      if (p.colors.size() > 256) break;
    }
  }
  if (p.colors.size() > 256) {
    p.colors.clear();
    p.exact.clear();
    for (int r = 0; r < 6; ++r) {
      for (int g = 0; g < 7; ++g) {
        for (int b = 0; b < 6; ++b) {
          p.colors.push_back({static_cast<std::uint8_t>(r * 51),
                              static_cast<std::uint8_t>(g * 42 + (g == 6 ? 3 : 0)),
                              static_cast<std::uint8_t>(b * 51)});
        }
      }
    }
    for (int i = 0; i < 4; ++i) {
      const auto v = static_cast<std::uint8_t>(16 + i * 64);
      p.colors.push_back({v, v, v});
    }
    for (std::size_t i = 0; i < p.colors.size(); ++i) {
      p.exact.emplace(Palette::key(p.colors[i][0], p.colors[i][1], p.colors[i][2]),
                      static_cast<std::uint8_t>(i));
    }
  }
  return p;
}

void put_u16_le(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

class BitPacker {
public:
  void put(std::uint32_t code, int bits) {
    buf_ |= static_cast<std::uint64_t>(code) << count_;
    count_ += bits;
    while (count_ >= 8) {
      bytes_.push_back(static_cast<std::uint8_t>(buf_ & 0xFF));
      buf_ >>= 8;
      count_ -= 8;
    }
  }
  std::vector<std::uint8_t> finish() {
    if (count_ > 0) bytes_.push_back(static_cast<std::uint8_t>(buf_ & 0xFF));
    return std::move(bytes_);
  }

private:
  std::uint64_t buf_ = 0;
  int count_ = 0;
  std::vector<std::uint8_t> bytes_;
};

std::vector<std::uint8_t> lzw_compress(const std::vector<std::uint8_t>& indices,
                                       int min_code_size) {
  const std::uint32_t clear = 1u << min_code_size;
  const std::uint32_t end = clear + 1;
  BitPacker packer;
  std::unordered_map<std::uint32_t, std::uint32_t> dict;
  int code_size = min_code_size + 1;
  std::uint32_t next_code = end + 1;

  // Width grows after an emission once the next code to assign would not fit;
  // this keeps the end-of-stream codes in step with the decoder's table.
  const auto emit = [&](std::uint32_t code) {
    packer.put(code, code_size);
    if (next_code >= (1u << code_size) && code_size < 12) ++code_size;
  };
  const auto reset = [&] {
    dict.clear();
    code_size = min_code_size + 1;
    next_code = end + 1;
  };

  emit(clear);
  if (indices.empty()) {
    emit(end);
    return packer.finish();
  }

  std::uint32_t cur = indices[0];
  for (std::size_t i = 1; i < indices.size(); ++i) {
    const std::uint32_t sym = indices[i];
    const std::uint32_t key = (cur << 8) | sym;
    if (const auto it = dict.find(key); it != dict.end()) {
      cur = it->second;
      continue;
    }
    emit(cur);
    if (next_code < kMaxLzwCode) {
      dict.emplace(key, next_code++);
    } else {
      emit(clear);
      reset();
    }
    cur = sym;
  }
  emit(cur);
  emit(end);
  return packer.finish();
}

void put_sub_blocks(std::vector<std::uint8_t>& out, const std::vector<std::uint8_t>& data) {
  std::size_t pos = 0;
  while (pos < data.size()) {
    const std::size_t n = std::min<std::size_t>(255, data.size() - pos);
    out.push_back(static_cast<std::uint8_t>(n));
    out.insert(out.end(), data.begin() + static_cast<std::ptrdiff_t>(pos),
               data.begin() + static_cast<std::ptrdiff_t>(pos + n));
    pos += n;
  }
  out.push_back(0);
}

} // namespace

std::vector<std::uint8_t> encode_gif(std::span<const Image> frames, int delay_cs) {
  if (frames.empty()) throw ValueError("cannot encode a GIF with no frames");
  const std::uint32_t w = frames[0].width;
  const std::uint32_t h = frames[0].height;
  if (w == 0 || h == 0 || w > 0xFFFF || h > 0xFFFF) {
    throw ValueError("GIF canvas must be 1..65535 pixels per side");
  }
  for (const Image& f : frames) {
    if (f.width != w || f.height != h) throw ValueError("GIF frames must share one size");
  }
  if (delay_cs < 0 || delay_cs > 0xFFFF) throw ValueError("GIF delay out of range");

  const Palette palette = build_palette(frames[0]);
  int gct_exp = 1;  // table size 2^gct_exp, at least 2 entries
  while ((1u << gct_exp) < palette.colors.size()) ++gct_exp;
  const int min_code_size = std::max(2, gct_exp);

  std::vector<std::uint8_t> out;
  const char* sig = "GIF89a";
  out.insert(out.end(), sig, sig + 6);
  put_u16_le(out, static_cast<std::uint16_t>(w));
  put_u16_le(out, static_cast<std::uint16_t>(h));
  out.push_back(static_cast<std::uint8_t>(0xF0 | (gct_exp - 1)));  // GCT, 8-bit resolution
  out.push_back(0);  // background color index
  out.push_back(0);  // pixel aspect ratio

  for (std::size_t i = 0; i < (1u << gct_exp); ++i) {
    if (i < palette.colors.size()) {
      out.push_back(palette.colors[i][0]);
      out.push_back(palette.colors[i][1]);
      out.push_back(palette.colors[i][2]);
    } else {
      out.insert(out.end(), {0, 0, 0});
    }
  }

  // NETSCAPE2.0 looping extension, loop count 0 = forever.
  const std::uint8_t loop[] = {0x21, 0xFF, 0x0B, 'N', 'E', 'T', 'S', 'C', 'A', 'P',
                               'E',  '2',  '.',  '0', 3,   1,   0,   0,   0};
  out.insert(out.end(), loop, loop + sizeof(loop));

  std::vector<std::uint8_t> indices(static_cast<std::size_t>(w) * h);
  for (const Image& frame : frames) {
    out.push_back(0x21);  // graphic control extension
    out.push_back(0xF9);
    out.push_back(4);
    out.push_back(0x04);  // disposal: do not dispose
    put_u16_le(out, static_cast<std::uint16_t>(delay_cs));
    out.push_back(0);  // no transparent color
    out.push_back(0);

    out.push_back(0x2C);  // image descriptor, full canvas
    put_u16_le(out, 0);
    put_u16_le(out, 0);
    put_u16_le(out, static_cast<std::uint16_t>(w));
    put_u16_le(out, static_cast<std::uint16_t>(h));
    out.push_back(0);  // no local color table

    for (std::size_t i = 0; i < indices.size(); ++i) {
      indices[i] = palette.index_of(frame.rgb[i * 3], frame.rgb[i * 3 + 1], frame.rgb[i * 3 + 2]);
    }
    out.push_back(static_cast<std::uint8_t>(min_code_size));
    put_sub_blocks(out, lzw_compress(indices, min_code_size));
  }

  out.push_back(0x3B);  // trailer
  return out;
}

} // namespace posekit

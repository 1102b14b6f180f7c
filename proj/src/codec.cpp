#include "posekit/codec.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <unordered_set>

#include "posekit/error.hpp"

namespace posekit {

namespace {

constexpr float kVersion = 0.1f;
constexpr float kVersionLo = 0.0999f;
constexpr float kVersionHi = 0.1001f;

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_f32(std::vector<std::uint8_t>& out, float v) {
  const std::uint32_t u = std::bit_cast<std::uint32_t>(v);
  out.push_back(static_cast<std::uint8_t>(u & 0xFF));
  out.push_back(static_cast<std::uint8_t>((u >> 8) & 0xFF));
  out.push_back(static_cast<std::uint8_t>((u >> 16) & 0xFF));
  out.push_back(static_cast<std::uint8_t>((u >> 24) & 0xFF));
}

std::uint16_t checked_u16(std::size_t v, const char* what) {
  if (v > 0xFFFF) {
    throw ValueError(std::string(what) + " exceeds uint16 range: " + std::to_string(v));
  }
  return static_cast<std::uint16_t>(v);
}

void put_str(std::vector<std::uint8_t>& out, const std::string& s, const char* what) {
  put_u16(out, checked_u16(s.size(), what));
  out.insert(out.end(), s.begin(), s.end());
}

bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t n;
    if (c < 0x80) n = 0;
    else if ((c & 0xE0) == 0xC0 && c >= 0xC2) n = 1;
    else if ((c & 0xF0) == 0xE0) n = 2;
    else if ((c & 0xF8) == 0xF0 && c <= 0xF4) n = 3;
    else return false;
    if (i + n >= s.size()) return false;
    for (std::size_t k = 1; k <= n; ++k) {
      if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return false;
    }
    // Reject overlong encodings and surrogates.
    if (n == 2) {
      const auto c1 = static_cast<unsigned char>(s[i + 1]);
      if (c == 0xE0 && c1 < 0xA0) return false;
      if (c == 0xED && c1 > 0x9F) return false;
    }
    if (n == 3) {
      const auto c1 = static_cast<unsigned char>(s[i + 1]);
      if (c == 0xF0 && c1 < 0x90) return false;
      if (c == 0xF4 && c1 > 0x8F) return false;
    }
    i += n + 1;
  }
  return true;
}

struct Cursor {
  std::span<const std::uint8_t> buf;
  std::size_t pos = 0;

  void need(std::size_t n, const char* what) const {
    if (pos + n > buf.size()) {
      throw FormatError(std::string("truncated input while reading ") + what);
    }
  }
  std::uint16_t u16(const char* what) {
    need(2, what);
    const std::uint16_t v = static_cast<std::uint16_t>(buf[pos] | (buf[pos + 1] << 8));
    pos += 2;
    return v;
  }
  float f32(const char* what) {
    need(4, what);
    const std::uint32_t u = static_cast<std::uint32_t>(buf[pos]) |
                            (static_cast<std::uint32_t>(buf[pos + 1]) << 8) |
                            (static_cast<std::uint32_t>(buf[pos + 2]) << 16) |
                            (static_cast<std::uint32_t>(buf[pos + 3]) << 24);
    pos += 4;
    return std::bit_cast<float>(u);
  }
  std::string str(const char* what) {
    const std::uint16_t len = u16(what);
    need(len, what);
    std::string s(reinterpret_cast<const char*>(buf.data() + pos), len);
    pos += len;
    if (!valid_utf8(s)) {
      throw FormatError(std::string(what) + " is not valid UTF-8");
    }
    return s;
  }
};

[[noreturn]] void fail(bool decoding, const std::string& msg) {
  if (decoding) throw FormatError(msg);
  throw ValueError(msg);
}

// Bulk float32 block IO; little-endian hosts get a straight memcpy.
void put_f32_block(std::vector<std::uint8_t>& out, const float* v, std::size_t n) {
  if constexpr (std::endian::native == std::endian::little) {
    const std::size_t at = out.size();
    out.resize(at + n * 4);
    std::memcpy(out.data() + at, v, n * 4);
  } else {
    for (std::size_t i = 0; i < n; ++i) put_f32(out, v[i]);
  }
}

void get_f32_block(const std::uint8_t* in, float* v, std::size_t n) {
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(v, in, n * 4);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t u = static_cast<std::uint32_t>(in[i * 4]) |
                              (static_cast<std::uint32_t>(in[i * 4 + 1]) << 8) |
                              (static_cast<std::uint32_t>(in[i * 4 + 2]) << 16) |
                              (static_cast<std::uint32_t>(in[i * 4 + 3]) << 24);
      v[i] = std::bit_cast<float>(u);
    }
  }
}

} // namespace

std::size_t Header::total_points() const {
  std::size_t n = 0;
  for (const auto& c : components) n += c.points.size();
  return n;
}

int Header::dims() const {
  return components.empty() ? 2 : components.front().dims();
}

std::optional<std::size_t> Header::point_index(std::string_view component,
                                               std::string_view point) const {
  std::size_t offset = 0;
  for (const auto& c : components) {
    if (c.name == component) {
      for (std::size_t i = 0; i < c.points.size(); ++i) {
        if (c.points[i] == point) return offset + i;
      }
      return std::nullopt;
    }
    offset += c.points.size();
  }
  return std::nullopt;
}

void check_header(const Header& h, bool decoding) {
  if (h.version < kVersionLo || h.version > kVersionHi || std::isnan(h.version)) {
    fail(decoding, "unsupported format version " + std::to_string(h.version) +
                       " (only 0.1 is supported)");
  }
  int dims = -1;
  for (const auto& c : h.components) {
    if (c.format.empty() || c.format.back() != 'C') {
      fail(decoding, "component '" + c.name + "': format must end in 'C'");
    }
    if (c.dims() != 2 && c.dims() != 3) {
      fail(decoding, "component '" + c.name + "': dims must be 2 or 3");
    }
    if (dims == -1) dims = c.dims();
    if (c.dims() != dims) {
      fail(decoding, "components disagree on dims; mixed 2D/3D headers are not supported");
    }
    std::unordered_set<std::string_view> seen;
    for (const auto& p : c.points) {
      if (!seen.insert(p).second) {
        fail(decoding, "component '" + c.name + "': duplicate point name '" + p + "'");
      }
    }
    for (const auto& l : c.limbs) {
      if (l.from >= c.points.size() || l.to >= c.points.size()) {
        fail(decoding, "component '" + c.name + "': limb index out of range");
      }
    }
    for (const auto& col : c.colors) {
      if (col.r > 255 || col.g > 255 || col.b > 255) {
        fail(decoding, "component '" + c.name + "': color channel above 255");
      }
    }
  }
}

std::size_t header_size(const Header& h) {
  std::size_t n = 4 + 6 + 2;
  for (const auto& c : h.components) {
    n += 2 + c.name.size() + 2 + c.format.size() + 6;
    for (const auto& p : c.points) n += 2 + p.size();
    n += c.limbs.size() * 4 + c.colors.size() * 6;
  }
  return n;
}

std::vector<std::uint8_t> encode_header(const Header& h) {
  check_header(h, false);
  std::vector<std::uint8_t> out;
  out.reserve(header_size(h));
  put_f32(out, h.version);
  put_u16(out, h.width);
  put_u16(out, h.height);
  put_u16(out, h.depth);
  put_u16(out, checked_u16(h.components.size(), "component count"));
  for (const auto& c : h.components) {
    put_str(out, c.name, "component name");
    put_str(out, c.format, "component format");
    put_u16(out, checked_u16(c.points.size(), "point count"));
    put_u16(out, checked_u16(c.limbs.size(), "limb count"));
    put_u16(out, checked_u16(c.colors.size(), "color count"));
    for (const auto& p : c.points) put_str(out, p, "point name");
    for (const auto& l : c.limbs) {
      put_u16(out, l.from);
      put_u16(out, l.to);
    }
    for (const auto& col : c.colors) {
      put_u16(out, col.r);
      put_u16(out, col.g);
      put_u16(out, col.b);
    }
  }
  return out;
}

DecodedHeader decode_header(std::span<const std::uint8_t> bytes) {
  Cursor cur{bytes};
  Header h;
  h.version = cur.f32("version");
  if (h.version < kVersionLo || h.version > kVersionHi || std::isnan(h.version)) {
    throw FormatError("unsupported format version " + std::to_string(h.version) +
                      " (only 0.1 is supported)");
  }
  h.width = cur.u16("width");
  h.height = cur.u16("height");
  h.depth = cur.u16("depth");
  const std::uint16_t ncomp = cur.u16("component count");
  h.components.reserve(ncomp);
  for (std::uint16_t i = 0; i < ncomp; ++i) {
    Component c;
    c.name = cur.str("component name");
    c.format = cur.str("component format");
    const std::uint16_t npoints = cur.u16("point count");
    const std::uint16_t nlimbs = cur.u16("limb count");
    const std::uint16_t ncolors = cur.u16("color count");
    c.points.reserve(npoints);
    for (std::uint16_t k = 0; k < npoints; ++k) c.points.push_back(cur.str("point name"));
    c.limbs.reserve(nlimbs);
    for (std::uint16_t k = 0; k < nlimbs; ++k) {
      Limb l;
      l.from = cur.u16("limb");
      l.to = cur.u16("limb");
      c.limbs.push_back(l);
    }
    c.colors.reserve(ncolors);
    for (std::uint16_t k = 0; k < ncolors; ++k) {
      Color col;
      col.r = cur.u16("color");
      col.g = cur.u16("color");
      col.b = cur.u16("color");
      c.colors.push_back(col);
    }
    h.components.push_back(std::move(c));
  }
  check_header(h, true);
  return DecodedHeader{std::move(h), cur.pos};
}

std::vector<std::uint8_t> encode_body(const Body& body) {
  const MaskedTensor& t = body.tensor;
  const std::size_t d = static_cast<std::size_t>(t.dims);
  if (t.data.size() != t.slots() * d || t.confidence.size() != t.slots()) {
    throw ValueError("tensor buffers do not match its extents");
  }
  std::vector<std::uint8_t> out;
  out.reserve(6 + t.slots() * (d + 1) * 4);
  put_u16(out, body.fps);
  // Advisory only: the true count when it fits, else 0. Readers infer the
  // frame count from the payload length either way.
  put_u16(out, t.frames <= 0xFFFF ? static_cast<std::uint16_t>(t.frames) : 0);
  put_u16(out, checked_u16(t.people, "people count"));
  put_f32_block(out, t.data.data(), t.data.size());
  put_f32_block(out, t.confidence.data(), t.confidence.size());
  return out;
}

Body decode_body(std::span<const std::uint8_t> bytes, const Header& header) {
  if (bytes.size() < 6) {
    throw FormatError("truncated body: " + std::to_string(bytes.size()) + " bytes, need 6");
  }
  Cursor cur{bytes};
  Body body;
  body.fps = cur.u16("fps");
  (void)cur.u16("frame count");  // advisory; length inference wins
  const std::uint16_t people = cur.u16("people count");

  const std::size_t points = header.total_points();
  const std::size_t d = static_cast<std::size_t>(header.dims());
  const std::size_t payload = bytes.size() - 6;
  const std::size_t per_frame = static_cast<std::size_t>(people) * points * (d + 1) * 4;

  std::size_t frames = 0;
  if (per_frame == 0) {
    if (payload != 0) {
      throw FormatError("corrupt body length: payload with zero-sized frames");
    }
  } else {
    if (payload % per_frame != 0) {
      throw FormatError("corrupt body length: " + std::to_string(payload) +
                        " bytes is not a multiple of the " + std::to_string(per_frame) +
                        "-byte frame size");
    }
    frames = payload / per_frame;
  }

  MaskedTensor t = MaskedTensor::zeroed(frames, people, points, static_cast<int>(d));
  const std::uint8_t* p = bytes.data() + 6;
  get_f32_block(p, t.data.data(), t.data.size());
  get_f32_block(p + t.data.size() * 4, t.confidence.data(), t.confidence.size());
  t.canonicalize();
  body.tensor = std::move(t);
  return body;
}

std::vector<std::uint8_t> write_pose(const Pose& pose) {
  if (pose.body.tensor.points != pose.header.total_points() ||
      (pose.header.total_points() > 0 && pose.body.tensor.dims != pose.header.dims())) {
    throw ValueError("body tensor points/dims do not match the header");
  }
  std::vector<std::uint8_t> out = encode_header(pose.header);
  const std::vector<std::uint8_t> body = encode_body(pose.body);
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

Pose read_pose(std::span<const std::uint8_t> bytes) {
  DecodedHeader dh = decode_header(bytes);
  Pose pose;
  pose.body = decode_body(bytes.subspan(dh.consumed), dh.header);
  pose.header = std::move(dh.header);
  return pose;
}

Pose read_pose_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
  if (f.bad()) throw IoError("error reading " + path);
  return read_pose(bytes);
}

void write_pose_file(const std::string& path, const Pose& pose) {
  const std::vector<std::uint8_t> bytes = write_pose(pose);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("error writing " + path);
}

} // namespace posekit

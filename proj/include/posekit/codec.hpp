#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "posekit/pose.hpp"

// Bit-exact reader/writer for `.pose` v0.1 files. See FORMAT.md for the byte
// layout; everything is little-endian, strings are uint16-length-prefixed
// UTF-8, and the body's uint16 frame-count field is advisory only (readers
// infer the frame count from the payload length).
namespace posekit {

struct DecodedHeader {
  Header header;
  std::size_t consumed = 0;
};

std::vector<std::uint8_t> encode_header(const Header& header);
DecodedHeader decode_header(std::span<const std::uint8_t> bytes);

/// Encoded size of a header without producing the bytes.
std::size_t header_size(const Header& header);

std::vector<std::uint8_t> encode_body(const Body& body);
/// `bytes` must be the whole remainder of the file after the header.
Body decode_body(std::span<const std::uint8_t> bytes, const Header& header);

std::vector<std::uint8_t> write_pose(const Pose& pose);
Pose read_pose(std::span<const std::uint8_t> bytes);

Pose read_pose_file(const std::string& path);
void write_pose_file(const std::string& path, const Pose& pose);

/// Validate header invariants; throws ValueError (encoding own data) or
/// FormatError (decoding foreign bytes) with a description of the violation.
void check_header(const Header& header, bool decoding);

} // namespace posekit

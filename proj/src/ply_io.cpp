// Copyright Contributors to the splatops Project
// SPDX-License-Identifier: Apache-2.0
#include "splat/ply_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "splat/common.hpp"

namespace splat {
namespace {

constexpr int kFixedFloats = 17;  // position..rot minus the f_rest block

std::string canonical_header(std::size_t vertex_count, int rest_count) {
  std::ostringstream out;
  out << "ply\n";
  out << "format binary_little_endian 1.0\n";
  out << "element vertex " << vertex_count << "\n";
  const char* fixed_prefix[] = {"x",      "y",      "z",     "nx",    "ny",
                                "nz",     "f_dc_0", "f_dc_1", "f_dc_2"};
  for (const char* name : fixed_prefix) out << "property float " << name << "\n";
  for (int i = 0; i < rest_count; ++i) out << "property float f_rest_" << i << "\n";
  const char* fixed_suffix[] = {"opacity", "scale_0", "scale_1", "scale_2",
                                "rot_0",   "rot_1",   "rot_2",   "rot_3"};
  for (const char* name : fixed_suffix) out << "property float " << name << "\n";
  out << "end_header\n";
  return out.str();
}

// Pulls one '\n'-terminated line starting at `pos`. Reports the offset of
// the line start on failure so the message pinpoints the malformed region.
std::string next_line(const std::string& data, std::size_t& pos,
                      const std::string& path) {
  if (pos >= data.size())
    throw Error(path + ": header ends prematurely at byte offset " +
                std::to_string(pos));
  const std::size_t nl = data.find('\n', pos);
  if (nl == std::string::npos)
    throw Error(path + ": unterminated header line at byte offset " +
                std::to_string(pos));
  std::string line = data.substr(pos, nl - pos);
  pos = nl + 1;
  return line;
}

float read_le_float(const unsigned char* p) {
  const std::uint32_t bits = static_cast<std::uint32_t>(p[0]) |
                             static_cast<std::uint32_t>(p[1]) << 8 |
                             static_cast<std::uint32_t>(p[2]) << 16 |
                             static_cast<std::uint32_t>(p[3]) << 24;
  return std::bit_cast<float>(bits);
}

void write_le_float(float value, std::string& out) {
  const std::uint32_t bits = std::bit_cast<std::uint32_t>(value);
  out.push_back(static_cast<char>(bits & 0xff));
  out.push_back(static_cast<char>((bits >> 8) & 0xff));
  out.push_back(static_cast<char>((bits >> 16) & 0xff));
  out.push_back(static_cast<char>((bits >> 24) & 0xff));
}

}  // namespace

Scene read_ply(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(path + ": cannot open file");
  std::ostringstream buf;
  buf << file.rdbuf();
  const std::string data = buf.str();

  std::size_t pos = 0;
  std::size_t line_start = pos;
  auto expect_line = [&](const std::string& want) {
    line_start = pos;
    const std::string got = next_line(data, pos, path);
    if (got != want)
      throw Error(path + ": expected '" + want + "' at byte offset " +
                  std::to_string(line_start) + ", found '" + got + "'");
  };
  expect_line("ply");
  expect_line("format binary_little_endian 1.0");

  line_start = pos;
  std::string line = next_line(data, pos, path);
  std::size_t vertex_count = 0;
  {
    std::istringstream in(line);
    std::string word_element, word_vertex;
    long long count = -1;
    in >> word_element >> word_vertex >> count;
    if (word_element != "element" || word_vertex != "vertex" || count < 0 ||
        !in || !(in >> std::ws).eof())
      throw Error(path + ": expected 'element vertex <count>' at byte offset " +
                  std::to_string(line_start) + ", found '" + line + "'");
    vertex_count = static_cast<std::size_t>(count);
  }

  // Collect the property list verbatim, then validate it as a whole.
  std::vector<std::string> props;
  while (true) {
    line_start = pos;
    line = next_line(data, pos, path);
    if (line == "end_header") break;
    std::istringstream in(line);
    std::string word_property, type, name;
    in >> word_property >> type >> name;
    if (word_property != "property" || type != "float" || name.empty() ||
        !(in >> std::ws).eof())
      throw Error(path +
                  ": expected 'property float <name>' or 'end_header' at byte "
                  "offset " +
                  std::to_string(line_start) + ", found '" + line + "'");
    props.push_back(name);
  }

  std::size_t prop_idx = 0;
  auto expect_prop = [&](const std::string& want) {
    if (prop_idx >= props.size())
      throw Error(path + ": missing property '" + want + "'");
    if (props[prop_idx] != want)
      throw Error(path + ": expected property '" + want + "', found '" +
                  props[prop_idx] + "'");
    ++prop_idx;
  };
  for (const char* name : {"x", "y", "z", "nx", "ny", "nz", "f_dc_0",
                           "f_dc_1", "f_dc_2"})
    expect_prop(name);
  int rest_count = 0;
  while (prop_idx < props.size() &&
         props[prop_idx] == "f_rest_" + std::to_string(rest_count)) {
    ++rest_count;
    ++prop_idx;
  }
  if (rest_count > kMaxRestCoeffs)
    throw Error(path + ": " + std::to_string(rest_count) +
                " f_rest properties exceed the supported maximum of " +
                std::to_string(kMaxRestCoeffs));
  if (rest_count % 3 != 0)
    throw Error(path + ": f_rest property count " + std::to_string(rest_count) +
                " is not a multiple of 3");
  for (const char* name : {"opacity", "scale_0", "scale_1", "scale_2", "rot_0",
                           "rot_1", "rot_2", "rot_3"})
    expect_prop(name);
  if (prop_idx != props.size())
    throw Error(path + ": unexpected property '" + props[prop_idx] + "'");

  const std::size_t header_size = pos;
  const std::size_t stride =
      static_cast<std::size_t>(kFixedFloats + rest_count) * 4;
  const std::size_t expected = vertex_count * stride;
  const std::size_t available = data.size() - header_size;
  if (available < expected)
    throw Error(path + ": truncated payload, expected " +
                std::to_string(expected) + " bytes after the header (ending at "
                "byte offset " +
                std::to_string(header_size + expected) + ") but the file ends "
                "at byte offset " +
                std::to_string(data.size()));
  if (available > expected)
    throw Error(path + ": trailing data after the vertex payload at byte "
                "offset " +
                std::to_string(header_size + expected));

  std::vector<RawGaussian> raw(vertex_count);
  const unsigned char* p =
      reinterpret_cast<const unsigned char*>(data.data()) + header_size;
  for (std::size_t v = 0; v < vertex_count; ++v) {
    RawGaussian& g = raw[v];
    auto next = [&]() {
      const float value = read_le_float(p);
      p += 4;
      return value;
    };
    for (int i = 0; i < 3; ++i) g.position[i] = next();
    for (int i = 0; i < 3; ++i) g.normal[i] = next();
    for (int i = 0; i < 3; ++i) g.f_dc[i] = next();
    for (int i = 0; i < rest_count; ++i) g.f_rest[i] = next();
    g.opacity_logit = next();
    for (int i = 0; i < 3; ++i) g.log_scale[i] = next();
    for (int i = 0; i < 4; ++i) g.quat[i] = next();
  }

  Scene scene = make_scene(std::move(raw), rest_count);
  scene.source_path = path;
  return scene;
}

void write_ply(const Scene& scene, const std::string& path) {
  std::string out = canonical_header(scene.raw.size(), scene.rest_count);
  out.reserve(out.size() +
              scene.raw.size() *
                  static_cast<std::size_t>(kFixedFloats + scene.rest_count) *
                  4);
  for (const RawGaussian& g : scene.raw) {
    for (int i = 0; i < 3; ++i) write_le_float(g.position[i], out);
    for (int i = 0; i < 3; ++i) write_le_float(g.normal[i], out);
    for (int i = 0; i < 3; ++i) write_le_float(g.f_dc[i], out);
    for (int i = 0; i < scene.rest_count; ++i) write_le_float(g.f_rest[i], out);
    write_le_float(g.opacity_logit, out);
    for (int i = 0; i < 3; ++i) write_le_float(g.log_scale[i], out);
    for (int i = 0; i < 4; ++i) write_le_float(g.quat[i], out);
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(path + ": cannot open file for writing");
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw Error(path + ": write failed");
}

}  // namespace splat

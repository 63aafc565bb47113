#pragma once

// Binary Netpbm (P5 gray / P6 RGB, maxval <= 255) reading and writing.

#include <cctype>
#include <fstream>
#include <string>
#include <vector>

#include "etrack/core.hpp"
#include "etrack/error.hpp"

namespace etrack::bench {

namespace detail {

inline std::string next_token(std::istream& in) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  return tok;
}

inline std::size_t parse_header_int(std::istream& in, const std::string& path) {
  const std::string tok = next_token(in);
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
    throw LoadError("malformed netpbm header: " + path);
  return std::stoul(tok);
}

}  // namespace detail

inline Image read_pnm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open image: " + path);
  const std::string magic = detail::next_token(in);
  std::size_t channels = 0;
  if (magic == "P5") channels = 1;
  else if (magic == "P6") channels = 3;
  else throw LoadError("unsupported image format (need binary PGM/PPM): " + path);
  const std::size_t w = detail::parse_header_int(in, path);
  const std::size_t h = detail::parse_header_int(in, path);
  const std::size_t maxval = detail::parse_header_int(in, path);
  if (w == 0 || h == 0 || maxval == 0 || maxval > 255) throw LoadError("unsupported netpbm dimensions/maxval: " + path);

  std::vector<unsigned char> buf(w * h * channels);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (in.gcount() != static_cast<std::streamsize>(buf.size())) throw LoadError("truncated image data: " + path);

  Image img(h, w, channels);
  const auto denom = static_cast<double>(maxval);
  for (std::size_t i = 0; i < buf.size(); ++i) img.data[i] = buf[i] / denom;
  return img;
}

inline void write_pnm(const std::string& path, const Image& img) {
  if (img.channels != 1 && img.channels != 3) throw InvalidInput("write_pnm: 1 or 3 channels required");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError("cannot write image: " + path);
  out << (img.channels == 3 ? "P6" : "P5") << '\n' << img.width << ' ' << img.height << "\n255\n";
  std::vector<unsigned char> buf(img.data.size());
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = static_cast<unsigned char>(to_byte(img.data[i]));
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw LoadError("write failed: " + path);
}

/// Rounds every sample to its 8-bit code, i.e. the value a write/read cycle yields.
inline Image quantize8(Image img) {
  for (double& v : img.data) v = to_byte(v) / 255.0;
  return img;
}

}  // namespace etrack::bench

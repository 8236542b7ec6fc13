#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "pavekit/core/types.hpp"
#include "pavekit/error.hpp"

namespace pavekit::ingest {

namespace detail {

inline std::uint32_t be32(const unsigned char* p) {
  return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) | (std::uint32_t(p[2]) << 8) |
         std::uint32_t(p[3]);
}

inline std::uint16_t be16(const unsigned char* p) { return std::uint16_t((p[0] << 8) | p[1]); }

}  // namespace detail

// Reads width/height from a PNG or JPEG header without decoding pixels.
inline ImageDims read_image_dims(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::IoError, "cannot open image " + path.string());
  unsigned char head[26];
  in.read(reinterpret_cast<char*>(head), sizeof head);
  const auto got = static_cast<std::size_t>(in.gcount());

  static const unsigned char png_sig[8] = {137, 'P', 'N', 'G', '\r', '\n', 26, '\n'};
  if (got >= 24 && std::equal(png_sig, png_sig + 8, head)) {
    // IHDR is mandatory first chunk: width at offset 16, height at 20
    return make_dims(static_cast<int>(detail::be32(head + 16)),
                     static_cast<int>(detail::be32(head + 20)));
  }

  if (got >= 4 && head[0] == 0xFF && head[1] == 0xD8) {
    in.clear();
    in.seekg(2);
    while (in) {
      int b = in.get();
      if (b != 0xFF) break;
      int marker = in.get();
      while (marker == 0xFF) marker = in.get();
      if (marker < 0) break;
      if (marker == 0xD9 || marker == 0xDA) break;  // EOI / start of scan
      unsigned char lenbuf[2];
      in.read(reinterpret_cast<char*>(lenbuf), 2);
      if (!in) break;
      const int seg_len = detail::be16(lenbuf);
      if (seg_len < 2) break;
      const bool is_sof = marker >= 0xC0 && marker <= 0xCF && marker != 0xC4 && marker != 0xC8 &&
                          marker != 0xCC;
      if (is_sof) {
        unsigned char sof[5];
        in.read(reinterpret_cast<char*>(sof), 5);
        if (!in) break;
        return make_dims(detail::be16(sof + 3), detail::be16(sof + 1));
      }
      in.seekg(seg_len - 2, std::ios::cur);
    }
    raise(Errc::UnsupportedImage, "no SOF segment in JPEG " + path.string());
  }

  raise(Errc::UnsupportedImage, "unrecognized image format: " + path.string());
}

}  // namespace pavekit::ingest

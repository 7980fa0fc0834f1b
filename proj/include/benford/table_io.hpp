#pragma once

// NFC1 coefficient cache.  Layout (all integers little-endian):
//   "NFC1" | u16 version=1 | u16 weight | u32 level | u64 X |
//   u8 id length | id bytes | X x 16-byte two's-complement lambda(1..X)

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include "errors.hpp"
#include "newforms.hpp"

namespace benford {

inline constexpr char kTableMagic[4] = {'N', 'F', 'C', '1'};
inline constexpr std::uint16_t kTableVersion = 1;

struct TableHeader {
  std::uint16_t version = 0;
  std::uint16_t weight = 0;
  std::uint32_t level = 0;
  std::uint64_t limit = 0;
  std::string form_id;
  std::size_t payload_offset = 0;
};

namespace detail {

template <class T>
void put_le(std::string& out, T v, std::size_t bytes = sizeof(T)) {
  for (std::size_t i = 0; i < bytes; ++i) out.push_back(static_cast<char>(static_cast<std::uint8_t>(v >> (8 * i))));
}

template <class T>
T get_le(const std::vector<char>& in, std::size_t at, std::size_t bytes = sizeof(T)) {
  T v = 0;
  for (std::size_t i = bytes; i-- > 0;) v = static_cast<T>((v << 8) | static_cast<std::uint8_t>(in[at + i]));
  return v;
}

inline std::vector<char> read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline TableHeader parse_header(const std::vector<char>& bytes) {
  constexpr std::size_t fixed = 4 + 2 + 2 + 4 + 8 + 1;
  if (bytes.size() < fixed) throw FormatError("coefficient file truncated in header");
  if (std::memcmp(bytes.data(), kTableMagic, 4) != 0) throw FormatError("bad magic, expected NFC1");
  TableHeader h;
  h.version = get_le<std::uint16_t>(bytes, 4);
  if (h.version != kTableVersion) throw FormatError("unsupported format version " + std::to_string(h.version));
  h.weight = get_le<std::uint16_t>(bytes, 6);
  h.level = get_le<std::uint32_t>(bytes, 8);
  h.limit = get_le<std::uint64_t>(bytes, 12);
  const std::size_t id_len = static_cast<std::uint8_t>(bytes[20]);
  if (bytes.size() < fixed + id_len) throw FormatError("coefficient file truncated in form id");
  h.form_id.assign(bytes.data() + fixed, id_len);
  h.payload_offset = fixed + id_len;
  return h;
}

}  // namespace detail

inline std::string serialize_table(const CoefficientTable& t) {
  if (t.form_id().size() > 255) throw InvalidParams("form id longer than 255 bytes");
  std::string out(kTableMagic, 4);
  detail::put_le(out, kTableVersion);
  detail::put_le(out, t.weight());
  detail::put_le(out, t.level());
  detail::put_le(out, static_cast<std::uint64_t>(t.limit()));
  detail::put_le(out, static_cast<std::uint8_t>(t.form_id().size()));
  out += t.form_id();
  out.reserve(out.size() + 16 * t.limit());
  for (i128 v : t.values()) detail::put_le(out, static_cast<u128>(v), 16);
  return out;
}

/// Writes to a sibling temporary and renames, so concurrent readers never see
/// a partial file.
inline void save_table(const CoefficientTable& t, const std::string& path) {
  const std::string bytes = serialize_table(t);
  const std::string tmp = path + ".tmp" + std::to_string(std::random_device{}());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp + " to " + path + ": " + ec.message());
}

/// Header only; used for cache-hit checks.
inline TableHeader read_table_header(const std::string& path) {
  return detail::parse_header(detail::read_all(path));
}

inline CoefficientTable load_table(const std::string& path) {
  const std::vector<char> bytes = detail::read_all(path);
  const TableHeader h = detail::parse_header(bytes);
  const std::size_t payload = bytes.size() - h.payload_offset;
  if (h.limit > payload / 16 || payload != 16 * h.limit) {
    throw FormatError("declared X = " + std::to_string(h.limit) + " does not match payload of " +
                      std::to_string(payload) + " bytes");
  }
  std::vector<i128> values(h.limit);
  for (std::size_t i = 0; i < h.limit; ++i) {
    values[i] = static_cast<i128>(detail::get_le<u128>(bytes, h.payload_offset + 16 * i, 16));
  }
  return CoefficientTable(h.form_id, h.weight, h.level, std::move(values));
}

}  // namespace benford

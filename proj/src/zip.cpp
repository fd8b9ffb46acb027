#include "blockpat/zip.hpp"

#include <zlib.h>

#include <cstdint>
#include <cstring>

#include "blockpat/error.hpp"

namespace blockpat::zip {
namespace {

constexpr std::uint32_t kLocalHeaderSig = 0x04034b50;
constexpr std::uint32_t kCentralHeaderSig = 0x02014b50;
constexpr std::uint32_t kEndOfCentralSig = 0x06054b50;
constexpr std::size_t kEndOfCentralSize = 22;
// 1980-01-01 00:00 in DOS format.
constexpr std::uint16_t kDosDate = (0 << 9) | (1 << 5) | 1;
constexpr std::uint16_t kDosTime = 0;

[[noreturn]] void corrupt(const std::string& why) {
  throw Error(ErrorKind::ArchiveUnreadable, "corrupt zip archive: " + why);
}

std::uint16_t u16(std::string_view b, std::size_t at) {
  if (at + 2 > b.size()) corrupt("truncated field");
  return static_cast<std::uint16_t>(static_cast<unsigned char>(b[at]) |
                                    (static_cast<unsigned char>(b[at + 1]) << 8));
}

std::uint32_t u32(std::string_view b, std::size_t at) {
  return static_cast<std::uint32_t>(u16(b, at)) |
         (static_cast<std::uint32_t>(u16(b, at + 2)) << 16);
}

void put16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put32(std::string& out, std::uint32_t v) {
  put16(out, static_cast<std::uint16_t>(v & 0xffff));
  put16(out, static_cast<std::uint16_t>(v >> 16));
}

std::uint32_t crc_of(std::string_view data) {
  uLong crc = crc32(0L, Z_NULL, 0);
  return static_cast<std::uint32_t>(
      crc32(crc, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size())));
}

std::string inflate_raw(std::string_view compressed, std::size_t expected_size) {
  std::string out(expected_size, '\0');
  z_stream zs{};
  if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) corrupt("inflate init failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(compressed.data()));
  zs.avail_in = static_cast<uInt>(compressed.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  int rc = inflate(&zs, Z_FINISH);
  std::size_t produced = zs.total_out;
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || produced != expected_size) corrupt("deflate stream error");
  return out;
}

std::size_t find_end_of_central(std::string_view bytes) {
  if (bytes.size() < kEndOfCentralSize) corrupt("too short");
  // The record sits at the end, followed by at most a 64 KiB comment.
  std::size_t lowest = bytes.size() > kEndOfCentralSize + 0xffff
                           ? bytes.size() - kEndOfCentralSize - 0xffff
                           : 0;
  for (std::size_t at = bytes.size() - kEndOfCentralSize + 1; at-- > lowest;) {
    if (u32(bytes, at) == kEndOfCentralSig) return at;
  }
  corrupt("end of central directory not found");
}

}  // namespace

bool looks_like_zip(std::string_view bytes) {
  return bytes.size() >= 4 && u32(bytes, 0) == kLocalHeaderSig;
}

std::vector<Entry> read(std::string_view bytes) {
  std::size_t eocd = find_end_of_central(bytes);
  std::uint16_t count = u16(bytes, eocd + 10);
  std::size_t cd = u32(bytes, eocd + 16);

  std::vector<Entry> entries;
  entries.reserve(count);
  for (std::uint16_t i = 0; i < count; ++i) {
    if (u32(bytes, cd) != kCentralHeaderSig) corrupt("bad central header");
    std::uint16_t flags = u16(bytes, cd + 8);
    std::uint16_t method = u16(bytes, cd + 10);
    std::uint32_t crc = u32(bytes, cd + 16);
    std::uint32_t csize = u32(bytes, cd + 20);
    std::uint32_t usize = u32(bytes, cd + 24);
    std::uint16_t name_len = u16(bytes, cd + 28);
    std::uint16_t extra_len = u16(bytes, cd + 30);
    std::uint16_t comment_len = u16(bytes, cd + 32);
    std::uint32_t local = u32(bytes, cd + 42);
    if (cd + 46 + name_len > bytes.size()) corrupt("truncated name");
    std::string name(bytes.substr(cd + 46, name_len));
    cd += 46 + name_len + extra_len + comment_len;

    if (flags & 0x1) corrupt("encrypted entry " + name);
    if (u32(bytes, local) != kLocalHeaderSig) corrupt("bad local header");
    std::size_t data_at = local + 30 + u16(bytes, local + 26) + u16(bytes, local + 28);
    if (data_at + csize > bytes.size()) corrupt("truncated entry " + name);
    std::string_view raw = bytes.substr(data_at, csize);

    if (!name.empty() && name.back() == '/') continue;

    std::string data;
    if (method == 0) {
      data = std::string(raw);
    } else if (method == 8) {
      data = inflate_raw(raw, usize);
    } else {
      corrupt("unsupported compression method " + std::to_string(method));
    }
    if (crc_of(data) != crc) corrupt("checksum mismatch in " + name);
    entries.push_back({std::move(name), std::move(data)});
  }
  return entries;
}

std::string write(const std::vector<Entry>& entries) {
  std::string out;
  std::string central;
  for (const auto& e : entries) {
    auto offset = static_cast<std::uint32_t>(out.size());
    std::uint32_t crc = crc_of(e.data);
    auto size = static_cast<std::uint32_t>(e.data.size());
    auto name_len = static_cast<std::uint16_t>(e.name.size());

    put32(out, kLocalHeaderSig);
    put16(out, 20);  // version needed
    put16(out, 0);   // flags
    put16(out, 0);   // stored
    put16(out, kDosTime);
    put16(out, kDosDate);
    put32(out, crc);
    put32(out, size);
    put32(out, size);
    put16(out, name_len);
    put16(out, 0);
    out += e.name;
    out += e.data;

    put32(central, kCentralHeaderSig);
    put16(central, 20);  // version made by
    put16(central, 20);
    put16(central, 0);
    put16(central, 0);
    put16(central, kDosTime);
    put16(central, kDosDate);
    put32(central, crc);
    put32(central, size);
    put32(central, size);
    put16(central, name_len);
    put16(central, 0);  // extra
    put16(central, 0);  // comment
    put16(central, 0);  // disk
    put16(central, 0);  // internal attrs
    put32(central, 0);  // external attrs
    put32(central, offset);
    central += e.name;
  }
  auto cd_offset = static_cast<std::uint32_t>(out.size());
  out += central;
  put32(out, kEndOfCentralSig);
  put16(out, 0);
  put16(out, 0);
  put16(out, static_cast<std::uint16_t>(entries.size()));
  put16(out, static_cast<std::uint16_t>(entries.size()));
  put32(out, static_cast<std::uint32_t>(central.size()));
  put32(out, cd_offset);
  put16(out, 0);
  return out;
}

}  // namespace blockpat::zip

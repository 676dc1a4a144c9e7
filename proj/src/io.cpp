#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

#include "hjym/lattice.hpp"

static_assert(std::endian::native == std::endian::little,
              "field files are little-endian; big-endian hosts are not supported");

namespace hjym {

// Field file layout (little-endian):
//   magic "HJVF" | u32 version=1 | u8 group_kind | u32 n_t,n_x,n_y,n_z |
//   f64 spacing | payload (links, site-major direction-minor; SU2 quaternion
//   w,x,y,z as 4*f64, U1 phase as 1*f64) | u32 crc32(payload)

namespace {

constexpr char kMagic[4] = {'H', 'J', 'V', 'F'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::string& buf, const T& v) {
  const char* p = reinterpret_cast<const char*>(&v);
  buf.append(p, sizeof(T));
}

template <class T>
T take(const std::string& buf, size_t& off) {
  if (off + sizeof(T) > buf.size()) throw IoError(IoError::Kind::Truncated, "field file truncated");
  T v;
  std::memcpy(&v, buf.data() + off, sizeof(T));
  off += sizeof(T);
  return v;
}

}  // namespace

void save_field(const GaugeField& f, const std::string& path) {
  const LatticeGeometry& g = f.geometry();
  std::string payload;
  if (const auto* u1 = std::get_if<U1Field>(&f.impl)) {
    payload.reserve(u1->links.size() * sizeof(double));
    for (double th : u1->links) put(payload, th);
  } else {
    const auto& su2 = std::get<Su2Field>(f.impl);
    payload.reserve(su2.links.size() * 4 * sizeof(double));
    for (const Quat& q : su2.links) {
      put(payload, q.w);
      put(payload, q.x);
      put(payload, q.y);
      put(payload, q.z);
    }
  }
  const std::uint32_t crc =
      crc32(0L, reinterpret_cast<const Bytef*>(payload.data()), payload.size());

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(IoError::Kind::Open, "cannot open " + path + " for writing");
  std::string head;
  head.append(kMagic, 4);
  put(head, kVersion);
  put(head, static_cast<std::uint8_t>(f.kind()));
  put(head, static_cast<std::uint32_t>(g.n_t));
  put(head, static_cast<std::uint32_t>(g.n_x));
  put(head, static_cast<std::uint32_t>(g.n_y));
  put(head, static_cast<std::uint32_t>(g.n_z));
  put(head, g.spacing);
  out.write(head.data(), head.size());
  out.write(payload.data(), payload.size());
  put(head = {}, crc);
  out.write(head.data(), head.size());
  if (!out) throw IoError(IoError::Kind::Open, "write failed for " + path);
}

GaugeField load_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(IoError::Kind::Open, "cannot open " + path);
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  size_t off = 0;
  if (buf.size() < 4 || std::memcmp(buf.data(), kMagic, 4) != 0)
    throw IoError(IoError::Kind::Magic, "not a field file (bad magic)");
  off = 4;
  const auto version = take<std::uint32_t>(buf, off);
  if (version != kVersion)
    throw IoError(IoError::Kind::Version,
                  "unsupported field file version " + std::to_string(version));
  const auto kind_byte = take<std::uint8_t>(buf, off);
  if (kind_byte > 1) throw IoError(IoError::Kind::Magic, "bad group kind byte");
  const GroupKind kind = static_cast<GroupKind>(kind_byte);
  LatticeGeometry g;
  g.n_t = static_cast<int>(take<std::uint32_t>(buf, off));
  g.n_x = static_cast<int>(take<std::uint32_t>(buf, off));
  g.n_y = static_cast<int>(take<std::uint32_t>(buf, off));
  g.n_z = static_cast<int>(take<std::uint32_t>(buf, off));
  g.spacing = take<double>(buf, off);
  g.validate();

  const long nlinks = g.links();
  const size_t payload_size =
      static_cast<size_t>(nlinks) * (kind == GroupKind::U1 ? 1 : 4) * sizeof(double);
  if (off + payload_size + sizeof(std::uint32_t) > buf.size())
    throw IoError(IoError::Kind::Truncated, "field file truncated");
  const std::uint32_t crc_expected =
      crc32(0L, reinterpret_cast<const Bytef*>(buf.data() + off), payload_size);
  size_t crc_off = off + payload_size;
  const auto crc_stored = take<std::uint32_t>(buf, crc_off);
  if (crc_expected != crc_stored)
    throw IoError(IoError::Kind::Checksum, "field file checksum mismatch");

  GaugeField f = GaugeField::flat(g, kind);
  if (kind == GroupKind::U1) {
    auto& links = std::get<U1Field>(f.impl).links;
    for (long i = 0; i < nlinks; ++i) links[i] = take<double>(buf, off);
  } else {
    auto& links = std::get<Su2Field>(f.impl).links;
    for (long i = 0; i < nlinks; ++i) {
      Quat q;
      q.w = take<double>(buf, off);
      q.x = take<double>(buf, off);
      q.y = take<double>(buf, off);
      q.z = take<double>(buf, off);
      links[i] = q;
    }
  }
  return f;
}

std::uint32_t boundary_digest(const BoundaryData& bd) {
  std::string buf;
  put(buf, static_cast<std::uint8_t>(bd.kind));
  put(buf, static_cast<std::uint32_t>(bd.n_x));
  put(buf, static_cast<std::uint32_t>(bd.n_y));
  put(buf, static_cast<std::uint32_t>(bd.n_z));
  put(buf, bd.spacing);
  if (bd.kind == GroupKind::U1) {
    for (double th : std::get<std::vector<double>>(bd.links)) put(buf, th);
  } else {
    for (const Quat& q : std::get<std::vector<Quat>>(bd.links)) {
      put(buf, q.w);
      put(buf, q.x);
      put(buf, q.y);
      put(buf, q.z);
    }
  }
  return crc32(0L, reinterpret_cast<const Bytef*>(buf.data()), buf.size());
}

}  // namespace hjym

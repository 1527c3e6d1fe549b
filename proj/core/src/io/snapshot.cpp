#include "cvf/io/snapshot.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>

#include "cvf/errors.hpp"

namespace cvf {

namespace {

constexpr char kMagic[6] = {'C', 'V', 'E', 'F', '1', '\n'};

template <typename U>
void put_le(std::vector<std::uint8_t>& out, U v) {
  for (std::size_t b = 0; b < sizeof(U); ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

template <typename U>
U get_le(const std::uint8_t* p) {
  U v = 0;
  for (std::size_t b = 0; b < sizeof(U); ++b) v |= static_cast<U>(p[b]) << (8 * b);
  return v;
}

void put_f64(std::vector<std::uint8_t>& out, double x) {
  put_le(out, std::bit_cast<std::uint64_t>(x));
}

double get_f64(const std::uint8_t* p) { return std::bit_cast<double>(get_le<std::uint64_t>(p)); }

}  // namespace

std::vector<std::uint8_t> encode_snapshot(const FlowState& st) {
  const Grid& g = st.grid();
  std::vector<std::uint8_t> out;
  out.reserve(kSnapshotHeaderBytes + 13 * g.size() * 8);
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  for (int a = 0; a < 3; ++a) put_le(out, static_cast<std::uint32_t>(g.n()[a]));
  for (int a = 0; a < 3; ++a) put_f64(out, g.length()[a]);
  put_f64(out, st.t);
  for (double x : st.rho.data()) put_f64(out, x);
  for (double x : st.u.data()) put_f64(out, x);
  for (double x : st.E.data()) put_f64(out, x);
  return out;
}

FlowState decode_snapshot(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kSnapshotHeaderBytes) {
    throw Error(ErrorCode::FormatError, "snapshot shorter than its header (" +
                                            std::to_string(bytes.size()) + " bytes)");
  }
  if (std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    throw Error(ErrorCode::FormatError, "bad snapshot magic");
  }
  const std::uint8_t* p = bytes.data() + sizeof kMagic;
  std::array<int, 3> n;
  for (int a = 0; a < 3; ++a, p += 4) {
    const std::uint32_t v = get_le<std::uint32_t>(p);
    if (v < 4 || v > 4096) {
      throw Error(ErrorCode::FormatError, "snapshot grid size " + std::to_string(v) + " out of range");
    }
    n[a] = static_cast<int>(v);
  }
  std::array<double, 3> len;
  for (int a = 0; a < 3; ++a, p += 8) len[a] = get_f64(p);
  const double t = get_f64(p);
  p += 8;

  const std::size_t points = static_cast<std::size_t>(n[0]) * static_cast<std::size_t>(n[1]) *
                             static_cast<std::size_t>(n[2]);
  const std::size_t expect = kSnapshotHeaderBytes + 13 * points * 8;
  if (bytes.size() != expect) {
    throw Error(ErrorCode::FormatError, "snapshot length " + std::to_string(bytes.size()) +
                                            " does not match expected " + std::to_string(expect));
  }
  if (!std::isfinite(t)) throw Error(ErrorCode::FormatError, "snapshot time is not finite");
  std::optional<Grid> grid;
  try {
    grid.emplace(n, len);
  } catch (const Error& e) {
    throw Error(ErrorCode::FormatError, std::string("snapshot grid: ") + e.what());
  }
  FlowState st(*grid);
  st.t = t;
  for (auto& x : st.rho.data()) x = get_f64(p), p += 8;
  for (auto& x : st.u.data()) x = get_f64(p), p += 8;
  for (auto& x : st.E.data()) x = get_f64(p), p += 8;
  return st;
}

void write_snapshot(const std::filesystem::path& path, const FlowState& state) {
  const auto bytes = encode_snapshot(state);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

FlowState read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decode_snapshot(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace cvf

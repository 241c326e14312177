#include "crystal/grid.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>

#include "crystal/error.hpp"

namespace crystal {

namespace {

constexpr char kMagic[8] = {'C', 'R', 'Y', 'G', 'R', 'I', 'D', '1'};

template <class T>
void put(std::ostream& os, T value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T value{};
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!is) throw Error(ErrorCode::Io, "truncated grid file");
  return value;
}

}  // namespace

GridField::GridField(std::size_t width, std::size_t height, double spacing, Vec2 origin, BoundaryMode boundary,
                     double pad_value)
    : width_(width),
      height_(height),
      spacing_(spacing),
      origin_(origin),
      boundary_(boundary),
      pad_value_(pad_value),
      values_(width * height, 0.0) {
  if (width == 0 || height == 0) throw Error(ErrorCode::InvalidArgument, "grid dimensions must be positive");
  if (!(spacing > 0.0) || !std::isfinite(spacing)) throw Error(ErrorCode::InvalidArgument, "spacing must be positive");
  if (!std::isfinite(pad_value)) throw Error(ErrorCode::InvalidArgument, "pad value must be finite");
}

void GridField::set_boundary(BoundaryMode mode, double pad_value) {
  if (!std::isfinite(pad_value)) throw Error(ErrorCode::InvalidArgument, "pad value must be finite");
  boundary_ = mode;
  pad_value_ = pad_value;
}

void GridField::validate() const {
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "grid holds a non-finite value");
  }
}

GridField grid_over(Vec2 lo, Vec2 hi, std::size_t nodes_x, BoundaryMode boundary, double pad_value) {
  if (nodes_x < 2 || !(hi.x > lo.x) || !(hi.y >= lo.y))
    throw Error(ErrorCode::InvalidArgument, "bad grid box");
  const double h = (hi.x - lo.x) / static_cast<double>(nodes_x - 1);
  const auto ny = static_cast<std::size_t>(std::llround((hi.y - lo.y) / h)) + 1;
  return GridField(nodes_x, ny, h, lo, boundary, pad_value);
}

void write_binary(const GridField& g, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::Io, "cannot open " + path.string());
  os.write(kMagic, sizeof kMagic);
  put<std::uint64_t>(os, g.width());
  put<std::uint64_t>(os, g.height());
  put<double>(os, g.spacing());
  put<double>(os, g.origin().x);
  put<double>(os, g.origin().y);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(g.boundary()));
  put<double>(os, g.pad_value());
  os.write(reinterpret_cast<const char*>(g.values().data()),
           static_cast<std::streamsize>(g.size() * sizeof(double)));
  if (!os) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

GridField read_binary(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::Io, "cannot open " + path.string());
  char magic[sizeof kMagic];
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw Error(ErrorCode::Parse, "not a grid file");
  const auto w = get<std::uint64_t>(is);
  const auto h = get<std::uint64_t>(is);
  const auto spacing = get<double>(is);
  const auto ox = get<double>(is);
  const auto oy = get<double>(is);
  const auto mode = get<std::uint32_t>(is);
  const auto pad = get<double>(is);
  if (mode > 2) throw Error(ErrorCode::Parse, "unknown boundary mode");
  if (w == 0 || h == 0 || w > (1u << 20) || h > (1u << 20)) throw Error(ErrorCode::Parse, "bad grid dimensions");
  GridField g(w, h, spacing, {ox, oy}, static_cast<BoundaryMode>(mode), pad);
  is.read(reinterpret_cast<char*>(g.values().data()), static_cast<std::streamsize>(g.size() * sizeof(double)));
  if (!is) throw Error(ErrorCode::Io, "truncated grid file");
  g.validate();
  return g;
}

void write_csv(const GridField& g, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::Io, "cannot open " + path.string());
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t j = 0; j < g.height(); ++j) {
    for (std::size_t i = 0; i < g.width(); ++i) os << (i ? "," : "") << g.at(i, j);
    os << '\n';
  }
}

}  // namespace crystal

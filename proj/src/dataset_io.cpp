#include "bridgeseg/dataset_io.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <set>

#include "bridgeseg/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "raster format is little-endian; big-endian hosts are unsupported");

namespace bridgeseg {

namespace fs = std::filesystem;

namespace {

// Image size is not stored in the raster; manifests pin square slices so
// the side length is the square root of the byte count / 4.
int side_from_bytes(std::uintmax_t bytes, std::size_t elem, const fs::path& path) {
  const std::uintmax_t n = bytes / elem;
  if (n * elem != bytes) throw FormatError("raster size not a multiple of element size: " + path.string());
  const auto side = static_cast<int>(std::llround(std::sqrt(static_cast<double>(n))));
  if (static_cast<std::uintmax_t>(side) * side != n) {
    throw FormatError("raster is not square: " + path.string());
  }
  return side;
}

std::vector<char> read_all(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open file: " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return bytes;
}

}  // namespace

void write_f32_raster(const Tensor& pixels, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open file for writing: " + path.string());
  std::vector<float> buf(static_cast<std::size_t>(pixels.size()));
  for (std::int64_t i = 0; i < pixels.size(); ++i) buf[static_cast<std::size_t>(i)] = static_cast<float>(pixels[i]);
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (!out) throw FormatError("short write: " + path.string());
}

Tensor read_f32_raster(const fs::path& path, int height, int width) {
  const auto bytes = read_all(path);
  const std::size_t expected = static_cast<std::size_t>(height) * width * sizeof(float);
  if (bytes.size() != expected) {
    throw FormatError("raster has wrong size (" + std::to_string(bytes.size()) + " bytes, expected " +
                      std::to_string(expected) + "): " + path.string());
  }
  Tensor t({height, width});
  const float* src = reinterpret_cast<const float*>(bytes.data());
  for (std::int64_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(src[i]);
  return t;
}

void write_u8_raster(const LabelMask& mask, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open file for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(mask.pixels.data()),
            static_cast<std::streamsize>(mask.pixels.size()));
  if (!out) throw FormatError("short write: " + path.string());
}

LabelMask read_u8_raster(const fs::path& path, int height, int width) {
  const auto bytes = read_all(path);
  const std::size_t expected = static_cast<std::size_t>(height) * width;
  if (bytes.size() != expected) {
    throw FormatError("mask raster has wrong size: " + path.string());
  }
  LabelMask m = LabelMask::zeros(height, width);
  for (std::size_t i = 0; i < expected; ++i) {
    const auto v = static_cast<std::uint8_t>(bytes[i]);
    if (v > 1) throw FormatError("mask raster has non-binary value: " + path.string());
    m.pixels[i] = v;
  }
  return m;
}

fs::path save_dataset(const Dataset& dataset, const fs::path& dir) {
  dataset.manifest.validate();
  if (dataset.slices.size() != dataset.manifest.entries.size()) {
    throw ArgumentError("dataset has " + std::to_string(dataset.slices.size()) + " slices for " +
                        std::to_string(dataset.manifest.entries.size()) + " manifest entries");
  }
  fs::create_directories(dir);

  for (std::size_t i = 0; i < dataset.manifest.entries.size(); ++i) {
    write_f32_raster(dataset.slices[i].pixels, dir / dataset.manifest.entries[i].image);
  }
  std::set<std::string> written;
  for (const auto& e : dataset.manifest.entries) {
    if (!e.has_mask() || written.count(e.mask)) continue;
    const LabelMask* m = dataset.find_mask(e.subject_id, e.slice_index);
    if (m == nullptr) {
      throw ArgumentError("manifest references mask not present in dataset: " + e.mask);
    }
    write_u8_raster(*m, dir / e.mask);
    written.insert(e.mask);
  }

  const fs::path manifest_path = dir / "manifest.json";
  std::ofstream out(manifest_path, std::ios::trunc);
  if (!out) throw FormatError("cannot write manifest: " + manifest_path.string());
  out << dataset.manifest.to_json();
  return manifest_path;
}

Dataset load_dataset(const fs::path& dir) {
  const fs::path manifest_path = dir / "manifest.json";
  if (!fs::exists(manifest_path)) {
    throw FormatError("no manifest.json in " + dir.string());
  }
  Dataset ds;
  {
    std::ifstream in(manifest_path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    ds.manifest = DatasetManifest::from_json(text);
  }
  ds.manifest.validate();

  std::set<std::string> loaded_masks;
  for (const auto& e : ds.manifest.entries) {
    const fs::path img = dir / e.image;
    if (!fs::exists(img)) throw FormatError("manifest references missing image file: " + img.string());
    const int side = side_from_bytes(fs::file_size(img), sizeof(float), img);
    ImageSlice slice;
    slice.pixels = read_f32_raster(img, side, side);
    slice.domain = e.domain;
    slice.subject_id = e.subject_id;
    slice.slice_index = e.slice_index;
    slice.value_range = {-1.0, 1.0};
    ds.slices.push_back(std::move(slice));

    if (e.has_mask() && !loaded_masks.count(e.mask)) {
      const fs::path mp = dir / e.mask;
      if (!fs::exists(mp)) throw FormatError("manifest references missing mask file: " + mp.string());
      const int mside = side_from_bytes(fs::file_size(mp), 1, mp);
      LabelMask m = read_u8_raster(mp, mside, mside);
      m.subject_id = e.subject_id;
      m.slice_index = e.slice_index;
      ds.masks.push_back(std::move(m));
      loaded_masks.insert(e.mask);
    }
  }
  return ds;
}

}  // namespace bridgeseg

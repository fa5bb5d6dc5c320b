#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bridgeseg/image.hpp"

namespace bridgeseg {

enum class Split { TRAIN, VAL, TEST };

std::string split_name(Split s);
Split split_from_name(const std::string& name);

// One dataset record: an image raster plus an optional mask raster,
// both relative to the manifest's directory.
struct ManifestEntry {
  std::string subject_id;
  int slice_index = 0;
  Domain domain = Domain::MRI;
  std::string image;
  std::string mask;  // empty = no mask for this entry

  bool has_mask() const { return !mask.empty(); }
};

struct DatasetManifest {
  Split split = Split::TEST;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> generator_params;
  std::vector<ManifestEntry> entries;

  // Enforces the unpaired-training contract: a TRAIN manifest never lists
  // both an MRI and a CT slice for the same subject. Throws
  // ContractViolation on violation, ArgumentError on structural problems.
  void validate() const;

  std::string to_json() const;
  static DatasetManifest from_json(const std::string& text);
};

// In-memory dataset: slices aligned 1:1 with manifest entries, masks
// stored once per (subject, slice) pair. Entries from both domains of the
// same subject/slice reference the same mask raster.
struct Dataset {
  DatasetManifest manifest;
  std::vector<ImageSlice> slices;
  std::vector<LabelMask> masks;

  const LabelMask* find_mask(const std::string& subject_id, int slice_index) const;

  // Indices of entries with the given domain.
  std::vector<std::size_t> entries_with_domain(Domain d) const;
};

}  // namespace bridgeseg

#include "bridgeseg/manifest.hpp"

#include <set>

#include <nlohmann/json.hpp>

#include "bridgeseg/errors.hpp"

namespace bridgeseg {

using json = nlohmann::ordered_json;

std::string split_name(Split s) {
  switch (s) {
    case Split::TRAIN: return "train";
    case Split::VAL: return "val";
    case Split::TEST: return "test";
  }
  throw ArgumentError("unknown split enum value");
}

Split split_from_name(const std::string& name) {
  if (name == "train") return Split::TRAIN;
  if (name == "val") return Split::VAL;
  if (name == "test") return Split::TEST;
  throw FormatError("unknown split name: " + name);
}

void DatasetManifest::validate() const {
  for (const auto& e : entries) {
    if (e.subject_id.empty()) throw ArgumentError("manifest entry with empty subject_id");
    if (e.slice_index < 0) throw ArgumentError("manifest entry with negative slice_index");
    if (e.image.empty()) {
      throw ArgumentError("manifest entry without image path: subject " + e.subject_id);
    }
  }
  if (split != Split::TRAIN) return;
  std::set<std::string> mri_subjects, ct_subjects;
  for (const auto& e : entries) {
    if (e.domain == Domain::MRI) mri_subjects.insert(e.subject_id);
    if (e.domain == Domain::CT) ct_subjects.insert(e.subject_id);
  }
  for (const auto& s : mri_subjects) {
    if (ct_subjects.count(s)) {
      throw ContractViolation("train manifest pairs MRI and CT slices of subject " + s);
    }
  }
}

std::string DatasetManifest::to_json() const {
  json j;
  j["seed"] = seed;
  j["split"] = split_name(split);
  j["generator_params"] = generator_params;
  j["entries"] = json::array();
  for (const auto& e : entries) {
    json je;
    je["subject_id"] = e.subject_id;
    je["slice_index"] = e.slice_index;
    je["domain"] = domain_name(e.domain);
    je["image"] = e.image;
    if (e.has_mask()) je["mask"] = e.mask;
    j["entries"].push_back(je);
  }
  return j.dump(2) + "\n";
}

DatasetManifest DatasetManifest::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("manifest is not valid JSON: ") + e.what());
  }
  DatasetManifest m;
  try {
    m.seed = j.at("seed").get<std::uint64_t>();
    m.split = split_from_name(j.at("split").get<std::string>());
    if (j.contains("generator_params")) {
      m.generator_params = j.at("generator_params").get<std::map<std::string, std::string>>();
    }
    for (const auto& je : j.at("entries")) {
      ManifestEntry e;
      e.subject_id = je.at("subject_id").get<std::string>();
      e.slice_index = je.at("slice_index").get<int>();
      e.domain = domain_from_name(je.at("domain").get<std::string>());
      e.image = je.at("image").get<std::string>();
      if (je.contains("mask")) e.mask = je.at("mask").get<std::string>();
      m.entries.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("manifest missing required field: ") + e.what());
  }
  return m;
}

const LabelMask* Dataset::find_mask(const std::string& subject_id, int slice_index) const {
  for (const auto& m : masks) {
    if (m.subject_id == subject_id && m.slice_index == slice_index) return &m;
  }
  return nullptr;
}

std::vector<std::size_t> Dataset::entries_with_domain(Domain d) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    if (manifest.entries[i].domain == d) out.push_back(i);
  }
  return out;
}

}  // namespace bridgeseg

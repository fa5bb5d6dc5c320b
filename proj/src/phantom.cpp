#include "bridgeseg/phantom.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "bridgeseg/errors.hpp"
#include "bridgeseg/preprocess.hpp"
#include "bridgeseg/rng.hpp"

namespace bridgeseg {

namespace {

constexpr std::uint64_t kTagAnatomy = hash_tag("phantom.anatomy");
constexpr std::uint64_t kTagNoise = hash_tag("phantom.noise");

struct Ellipse {
  double cx, cy;    // center, pixel coordinates
  double ax, ay;    // semi-axes
  double rot;       // rotation, radians

  // <= 1 inside.
  double level(double x, double y) const {
    const double dx = x - cx, dy = y - cy;
    const double c = std::cos(rot), s = std::sin(rot);
    const double u = dx * c + dy * s;
    const double v = -dx * s + dy * c;
    return (u * u) / (ax * ax) + (v * v) / (ay * ay);
  }
  bool contains(double x, double y) const { return level(x, y) <= 1.0; }
};

// Per-subject anatomy; all jitter comes from one seeded stream so the
// MRI and CT renderings share geometry exactly.
struct Anatomy {
  Ellipse skull_outer;   // outer skull boundary
  Ellipse brain;         // inner skull boundary = brain extent
  Ellipse vent_left;
  Ellipse vent_right;
};

Anatomy make_anatomy(std::uint64_t seed, int subject, int size) {
  Rng rng(derive_seed(seed, {kTagAnatomy, static_cast<std::uint64_t>(subject)}));
  const double s = static_cast<double>(size);
  Anatomy a;
  const double cx = s * 0.5 + rng.uniform(-0.02, 0.02) * s;
  const double cy = s * 0.5 + rng.uniform(-0.02, 0.02) * s;
  const double ax = s * (0.40 + rng.uniform(-0.02, 0.02));
  const double ay = s * (0.34 + rng.uniform(-0.02, 0.02));
  a.skull_outer = {cx, cy, ax, ay, rng.uniform(-0.06, 0.06)};
  a.brain = a.skull_outer;
  a.brain.ax *= 0.90;
  a.brain.ay *= 0.88;

  // Bilateral ventricles, mildly asymmetric.
  const double vx = ax * (0.24 + rng.uniform(-0.03, 0.03));
  const double vy = ay * (0.05 + rng.uniform(-0.04, 0.04));
  for (int side = 0; side < 2; ++side) {
    const double sign = side == 0 ? -1.0 : 1.0;
    Ellipse v;
    v.cx = cx + sign * vx;
    v.cy = cy - vy;
    v.ax = ax * (0.115 + rng.uniform(-0.015, 0.015));
    v.ay = ay * (0.30 + rng.uniform(-0.04, 0.04));
    v.rot = a.skull_outer.rot + sign * (0.12 + rng.uniform(-0.05, 0.05));
    (side == 0 ? a.vent_left : a.vent_right) = v;
  }
  return a;
}

// Ventricle size varies along the slice axis like real anatomy does.
double slice_scale(int slice_index, int slices_per_subject) {
  const double u = (slice_index + 0.5) / slices_per_subject;
  return 0.85 + 0.3 * std::sin(M_PI * u);
}

Ellipse scaled(const Ellipse& e, double f) {
  Ellipse out = e;
  out.ax *= f;
  out.ay *= f;
  return out;
}

enum class Tissue { AIR, SKULL, BRAIN, VENTRICLE };

Tissue classify(const Anatomy& a, const Ellipse& vl, const Ellipse& vr, double x, double y) {
  if (vl.contains(x, y) || vr.contains(x, y)) return Tissue::VENTRICLE;
  if (a.brain.contains(x, y)) return Tissue::BRAIN;
  if (a.skull_outer.contains(x, y)) return Tissue::SKULL;
  return Tissue::AIR;
}

// 2x2 subsampled rendering; boundary pixels get partial-volume values.
Tensor render(const Anatomy& a, const Ellipse& vl, const Ellipse& vr, int size,
              double air, double skull, double brain, double ventricle, double shading) {
  Tensor img({size, size});
  const double cx = a.skull_outer.cx, cy = a.skull_outer.cy;
  const double rr = a.skull_outer.ax * a.skull_outer.ay;
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      double acc = 0.0;
      for (int sy = 0; sy < 2; ++sy) {
        for (int sx = 0; sx < 2; ++sx) {
          const double px = x + 0.25 + 0.5 * sx;
          const double py = y + 0.25 + 0.5 * sy;
          double value;
          switch (classify(a, vl, vr, px, py)) {
            case Tissue::AIR: value = air; break;
            case Tissue::SKULL: value = skull; break;
            case Tissue::VENTRICLE: value = ventricle; break;
            case Tissue::BRAIN: {
              const double rho2 = ((px - cx) * (px - cx) + (py - cy) * (py - cy)) / rr;
              value = brain * (1.0 - shading * rho2);
              break;
            }
          }
          acc += value;
        }
      }
      img.at(y, x) = acc * 0.25;
    }
  }
  return img;
}

void add_noise(Tensor& img, double sigma, Rng& rng) {
  for (std::int64_t i = 0; i < img.size(); ++i) img[i] += sigma * rng.normal();
}

LabelMask rasterize_mask(const Ellipse& vl, const Ellipse& vr, int size) {
  LabelMask m = LabelMask::zeros(size, size);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double px = x + 0.5, py = y + 0.5;
      if (vl.contains(px, py) || vr.contains(px, py)) m.at(y, x) = 1;
    }
  }
  return m;
}

std::string subject_name(int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "s%03d", index);
  return buf;
}

std::string raster_name(const std::string& subject, int slice, Domain d) {
  return subject + "_" + std::to_string(slice) + "_" + domain_name(d) + ".f32";
}

std::string mask_name(const std::string& subject, int slice) {
  return subject + "_" + std::to_string(slice) + "_mask.u8";
}

}  // namespace

Dataset generate_phantoms(std::uint64_t seed, const PhantomParams& p) {
  if (p.n_subjects < 1) throw ArgumentError("generate_phantoms: n_subjects must be >= 1");
  if (p.slices_per_subject < 1) {
    throw ArgumentError("generate_phantoms: slices_per_subject must be >= 1");
  }
  if (p.size < 32) throw ArgumentError("generate_phantoms: size must be >= 32");

  Dataset ds;
  ds.manifest.split = p.split;
  ds.manifest.seed = seed;
  ds.manifest.generator_params = {
      {"generator", "phantom"},
      {"n_subjects", std::to_string(p.n_subjects)},
      {"slices_per_subject", std::to_string(p.slices_per_subject)},
      {"size", std::to_string(p.size)},
      {"first_subject", std::to_string(p.first_subject)},
      {"unpaired", p.unpaired ? "true" : "false"},
  };

  for (int si = 0; si < p.n_subjects; ++si) {
    const int subject_index = p.first_subject + si;
    const std::string subject = subject_name(subject_index);
    const Anatomy anatomy = make_anatomy(seed, subject_index, p.size);

    // Unpaired TRAIN: even subjects contribute labeled MRI slices, odd
    // subjects contribute unlabeled CT slices.
    const bool want_mri = !p.unpaired || si % 2 == 0;
    const bool want_ct = !p.unpaired || si % 2 == 1;
    const bool want_mask = !p.unpaired || want_mri;

    for (int k = 0; k < p.slices_per_subject; ++k) {
      const double f = slice_scale(k, p.slices_per_subject);
      const Ellipse vl = scaled(anatomy.vent_left, f);
      const Ellipse vr = scaled(anatomy.vent_right, f);

      LabelMask mask = rasterize_mask(vl, vr, p.size);
      mask.subject_id = subject;
      mask.slice_index = k;
      if (want_mask) ds.masks.push_back(mask);

      if (want_mri) {
        // Arbitrary-unit T1-style rendering in [0, 1]: bright brain,
        // dark CSF and bone.
        Tensor raw = render(anatomy, vl, vr, p.size,
                            /*air=*/0.02, /*skull=*/0.12, /*brain=*/0.62,
                            /*ventricle=*/0.18, /*shading=*/0.10);
        Rng noise(derive_seed(seed, {kTagNoise, static_cast<std::uint64_t>(subject_index),
                                     static_cast<std::uint64_t>(k), 0}));
        add_noise(raw, 0.015, noise);
        ImageSlice slice;
        slice.pixels = normalize(raw, 0.0, 1.0);
        quantize_to_float32(slice.pixels);
        slice.domain = Domain::MRI;
        slice.subject_id = subject;
        slice.slice_index = k;
        slice.value_range = {-1.0, 1.0};
        ds.slices.push_back(std::move(slice));

        ManifestEntry e;
        e.subject_id = subject;
        e.slice_index = k;
        e.domain = Domain::MRI;
        e.image = raster_name(subject, k, Domain::MRI);
        if (want_mask) e.mask = mask_name(subject, k);
        ds.manifest.entries.push_back(std::move(e));
      }

      if (want_ct) {
        // Hounsfield-unit rendering: windowing to [-10, 500] HU clamps
        // air and compresses the soft-tissue contrast.
        Tensor raw = render(anatomy, vl, vr, p.size,
                            /*air=*/-1000.0, /*skull=*/720.0, /*brain=*/65.0,
                            /*ventricle=*/8.0, /*shading=*/0.06);
        Rng noise(derive_seed(seed, {kTagNoise, static_cast<std::uint64_t>(subject_index),
                                     static_cast<std::uint64_t>(k), 1}));
        add_noise(raw, 12.0, noise);
        ImageSlice slice;
        slice.pixels = normalize(hu_window(raw, -10.0, 500.0), -10.0, 500.0);
        quantize_to_float32(slice.pixels);
        slice.domain = Domain::CT;
        slice.subject_id = subject;
        slice.slice_index = k;
        slice.value_range = {-1.0, 1.0};
        ds.slices.push_back(std::move(slice));

        ManifestEntry e;
        e.subject_id = subject;
        e.slice_index = k;
        e.domain = Domain::CT;
        e.image = raster_name(subject, k, Domain::CT);
        if (want_mask && !p.unpaired) e.mask = mask_name(subject, k);
        ds.manifest.entries.push_back(std::move(e));
      }
    }
  }

  ds.manifest.validate();
  return ds;
}

Dataset generate_phantoms(std::uint64_t seed, int n_subjects, int slices_per_subject, int size) {
  PhantomParams p;
  p.n_subjects = n_subjects;
  p.slices_per_subject = slices_per_subject;
  p.size = size;
  return generate_phantoms(seed, p);
}

}  // namespace bridgeseg

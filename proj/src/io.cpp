#include "nuc/io.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include "nuc/serialize.hpp"

namespace nuc {

namespace {

std::vector<char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path.string());
  in.seekg(0, std::ios::end);
  const std::streamoff size = in.tellg();
  in.seekg(0, std::ios::beg);
  std::vector<char> bytes(static_cast<std::size_t>(size));
  if (size > 0 && !in.read(bytes.data(), size)) {
    throw io_error("failed to read " + path.string());
  }
  return bytes;
}

float load_f32(const char* p) {
  float v;
  std::memcpy(&v, p, 4);
  return v;
}

std::uint32_t load_u32(const char* p) {
  std::uint32_t v;
  std::memcpy(&v, p, 4);
  return v;
}

}  // namespace

LoadedScan read_scan(const std::filesystem::path& path) {
  const std::vector<char> bytes = slurp(path);
  if (bytes.size() % 16 != 0) {
    std::ostringstream os;
    os << path.string() << ": size " << bytes.size() << " is not a multiple of the 16-byte record";
    throw format_error(os.str());
  }
  LoadedScan scan;
  scan.raw_points = bytes.size() / 16;

  PointCloud::FeatureMatrix features(scan.raw_points, 4);
  std::vector<std::uint64_t> kept;
  Eigen::Index row = 0;
  for (std::uint64_t m = 0; m < scan.raw_points; ++m) {
    const char* rec = bytes.data() + 16 * m;
    float v[4];
    for (int c = 0; c < 4; ++c) v[c] = load_f32(rec + 4 * c);
    if (!(std::isfinite(v[0]) && std::isfinite(v[1]) && std::isfinite(v[2]) &&
          std::isfinite(v[3]))) {
      ++scan.rejected_points;
      continue;
    }
    for (int c = 0; c < 4; ++c) features(row, c) = v[c];
    kept.push_back(m);
    ++row;
  }
  features.conservativeResize(row, 4);
  scan.cloud.features = std::move(features);
  if (scan.rejected_points > 0) scan.kept = std::move(kept);
  return scan;
}

std::vector<std::uint32_t> read_labels(const std::filesystem::path& path,
                                       std::uint64_t expected_points) {
  const std::vector<char> bytes = slurp(path);
  if (bytes.size() != 4 * expected_points) {
    std::ostringstream os;
    os << path.string() << ": holds " << bytes.size() / 4 << " label records (" << bytes.size()
       << " bytes) but the scan has " << expected_points << " points";
    throw format_error(os.str());
  }
  std::vector<std::uint32_t> labels(expected_points);
  for (std::uint64_t m = 0; m < expected_points; ++m) {
    labels[m] = load_u32(bytes.data() + 4 * m);
  }
  return labels;
}

void attach_labels(LoadedScan& scan, const std::filesystem::path& path) {
  const std::vector<std::uint32_t> raw = read_labels(path, scan.raw_points);
  if (scan.rejected_points == 0) {
    scan.cloud.labels = raw;
    return;
  }
  scan.cloud.labels.resize(scan.kept.size());
  for (std::size_t n = 0; n < scan.kept.size(); ++n) {
    scan.cloud.labels[n] = raw[scan.kept[n]];
  }
}

void write_scan(const PointCloud& cloud, const std::filesystem::path& path) {
  if (cloud.channels() != 4) {
    throw std::invalid_argument("write_scan: scan format needs exactly 4 channels");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open " + path.string() + " for writing");
  for (Eigen::Index n = 0; n < cloud.size(); ++n) {
    for (int c = 0; c < 4; ++c) {
      const float v = cloud.features(n, c);
      char buf[4];
      std::memcpy(buf, &v, 4);
      out.write(buf, 4);
    }
  }
  if (!out) throw io_error("failed writing " + path.string());
}

void write_labels(const PointCloud& cloud, const std::filesystem::path& path) {
  if (!cloud.has_labels()) throw std::invalid_argument("write_labels: cloud has no labels");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open " + path.string() + " for writing");
  for (std::uint32_t label : cloud.labels) {
    char buf[4];
    std::memcpy(buf, &label, 4);
    out.write(buf, 4);
  }
  if (!out) throw io_error("failed writing " + path.string());
}

SynthesisSpec SynthesisSpec::kitti_like(std::uint64_t seed) {
  SynthesisSpec spec;
  spec.seed = seed;
  return spec;
}

SynthesisSpec SynthesisSpec::two_class_boundary(std::uint64_t seed) {
  SynthesisSpec spec;
  spec.seed = seed;
  spec.dropout_rate = 0.1;
  // wide enough that rings smear across several annulus edges
  spec.range_jitter = 0.12;
  spec.classes.clear();
  std::uint16_t cls = 1;
  for (double edge = 1.3; edge < spec.max_range + 1.3; edge += 1.3) {
    spec.classes.push_back({edge, cls});
    cls = cls == 1 ? 2 : 1;
  }
  return spec;
}

void SynthesisSpec::validate() const {
  if (beam_count < 1) throw config_error("synthesis: beam_count must be >= 1");
  if (azimuth_samples < 1) throw config_error("synthesis: azimuth_samples must be >= 1");
  if (!(max_range > 0.0)) throw config_error("synthesis: max_range must be > 0");
  if (!(elevation_min_deg <= elevation_max_deg) || elevation_max_deg >= 0.0) {
    throw config_error("synthesis: elevations must satisfy min <= max < 0 (beams hit the ground)");
  }
  if (!(sensor_height > 0.0)) throw config_error("synthesis: sensor_height must be > 0");
  if (classes.empty()) throw config_error("synthesis: need at least one class annulus");
  double prev = 0.0;
  for (const AnnulusClass& a : classes) {
    if (!(a.outer_radius > prev)) {
      throw config_error("synthesis: class annulus radii must be strictly increasing");
    }
    prev = a.outer_radius;
  }
  if (dropout_rate < 0.0 || dropout_rate >= 1.0) {
    throw config_error("synthesis: dropout_rate must be in [0, 1)");
  }
  if (range_jitter < 0.0 || ground_jitter < 0.0) {
    throw config_error("synthesis: jitters must be >= 0");
  }
}

PointCloud generate_synthetic(const SynthesisSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  // Fixed arithmetic instead of std::uniform_real_distribution keeps the
  // stream identical across standard libraries.
  const auto unit = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  const auto class_of = [&spec](double r) -> std::uint16_t {
    for (const AnnulusClass& a : spec.classes) {
      if (r < a.outer_radius) return a.class_id;
    }
    return spec.classes.back().class_id;
  };

  const double deg = kPi / 180.0;
  const std::uint64_t budget =
      static_cast<std::uint64_t>(spec.beam_count) * spec.azimuth_samples;
  PointCloud::FeatureMatrix features(budget, 4);
  std::vector<std::uint32_t> labels;
  labels.reserve(budget);

  Eigen::Index row = 0;
  for (int b = 0; b < spec.beam_count; ++b) {
    const double span = spec.elevation_max_deg - spec.elevation_min_deg;
    const double elev =
        spec.beam_count == 1
            ? spec.elevation_min_deg
            : spec.elevation_min_deg + span * b / (spec.beam_count - 1);
    const double ground_range = spec.sensor_height / std::tan(-elev * deg);
    const double nominal = std::min(ground_range, spec.max_range);

    for (int a = 0; a < spec.azimuth_samples; ++a) {
      // Five draws per sample regardless of branches, so the stream layout
      // is a pure function of (beam_count, azimuth_samples).
      const double u_keep = unit();
      const double u_phi = unit();
      const double u_range = unit();
      const double u_z = unit();
      const double u_intensity = unit();

      const double keep_prob = 1.0 - spec.dropout_rate * (nominal / spec.max_range);
      if (u_keep >= keep_prob) continue;

      const double phi = -kPi + (a + u_phi) * (2.0 * kPi / spec.azimuth_samples);
      double r = nominal + spec.range_jitter * (2.0 * u_range - 1.0);
      r = std::clamp(r, 0.0, spec.max_range);
      const double z = -spec.sensor_height + spec.ground_jitter * (2.0 * u_z - 1.0);

      features(row, 0) = static_cast<float>(r * std::cos(phi));
      features(row, 1) = static_cast<float>(r * std::sin(phi));
      features(row, 2) = static_cast<float>(z);
      features(row, 3) = static_cast<float>(u_intensity);
      labels.push_back(class_of(r));
      ++row;
    }
  }
  features.conservativeResize(row, 4);

  PointCloud cloud;
  cloud.features = std::move(features);
  cloud.labels = std::move(labels);
  return cloud;
}

GridConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw format_error(path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

void save_config(const GridConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open " + path.string() + " for writing");
  out << config_to_json(config).dump(2) << '\n';
  if (!out) throw io_error("failed writing " + path.string());
}

}  // namespace nuc

#include "nuc/serialize.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

namespace nuc {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

const char* policy_name(OutOfRangePolicy p) {
  return p == OutOfRangePolicy::ClampToEdge ? "clamp" : "drop";
}

OutOfRangePolicy policy_from(const std::string& s) {
  if (s == "clamp") return OutOfRangePolicy::ClampToEdge;
  if (s == "drop") return OutOfRangePolicy::Drop;
  throw config_error("out_of_range must be \"clamp\" or \"drop\", got \"" + s + "\"");
}

// Checked fetch: wrong types surface as config errors naming the key.
template <typename T>
T take(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("config key \"") + key + "\": " + e.what());
  }
}

template <typename T>
void take_if(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = take<T>(j, key);
}

}  // namespace

nlohmann::ordered_json config_to_json(const GridConfig& config) {
  nlohmann::ordered_json j;
  j["scheme"] = scheme_name(config.scheme);
  std::visit(
      [&j](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Api>) {
          j["a0"] = s.a0;
          j["d"] = s.d;
        } else if constexpr (std::is_same_v<S, Gpi>) {
          j["a0"] = s.a0;
          j["ratio"] = s.ratio;
        } else if constexpr (std::is_same_v<S, Piecewise>) {
          j["region_bounds"] = s.region_bounds;
          j["region_counts"] = s.region_counts;
        } else if constexpr (std::is_same_v<S, IncreasingD>) {
          j["a0"] = s.a0;
          j["d"] = s.d;
          j["d_prime"] = s.d_prime;
        }
      },
      config.scheme);
  j["n_r"] = config.n_r;
  j["n_phi"] = config.n_phi;
  j["n_z"] = config.n_z;
  j["z_min"] = config.z_min;
  j["z_max"] = config.z_max;
  j["r_max"] = config.r_max;
  j["scales"] = config.scales;
  j["out_of_range"] = policy_name(config.out_of_range);
  return j;
}

GridConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw config_error("config must be a JSON object");

  const std::string name = take<std::string>(j, "scheme");
  std::set<std::string> allowed{"scheme",  "n_r",   "n_phi", "n_z",   "z_min",
                                "z_max",   "r_max", "scales", "out_of_range"};
  GridConfig config;
  if (name == "uniform") {
    config.scheme = Uniform{};
  } else if (name == "api") {
    Api s;
    take_if(j, "a0", s.a0);
    take_if(j, "d", s.d);
    config.scheme = s;
    allowed.insert({"a0", "d"});
  } else if (name == "gpi") {
    Gpi s;
    take_if(j, "a0", s.a0);
    take_if(j, "ratio", s.ratio);
    config.scheme = s;
    allowed.insert({"a0", "ratio"});
  } else if (name == "piecewise") {
    Piecewise s;
    take_if(j, "region_bounds", s.region_bounds);
    take_if(j, "region_counts", s.region_counts);
    config.scheme = s;
    allowed.insert({"region_bounds", "region_counts"});
  } else if (name == "increasing-d") {
    IncreasingD s;
    take_if(j, "a0", s.a0);
    take_if(j, "d", s.d);
    take_if(j, "d_prime", s.d_prime);
    config.scheme = s;
    allowed.insert({"a0", "d", "d_prime"});
  } else {
    throw config_error("unknown scheme \"" + name + "\"");
  }

  for (const auto& [key, unused] : j.items()) {
    if (!allowed.contains(key)) {
      throw config_error("unknown config key \"" + key + "\" for scheme \"" + name + "\"");
    }
  }

  take_if(j, "n_r", config.n_r);
  take_if(j, "n_phi", config.n_phi);
  take_if(j, "n_z", config.n_z);
  take_if(j, "z_min", config.z_min);
  take_if(j, "z_max", config.z_max);
  take_if(j, "r_max", config.r_max);
  take_if(j, "scales", config.scales);
  if (j.contains("out_of_range")) {
    config.out_of_range = policy_from(take<std::string>(j, "out_of_range"));
  }
  config.validate();
  return config;
}

namespace {

nlohmann::ordered_json voxels_to_json(const ScaleLevel& level, bool has_labels) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const VoxelRecord& rec : level.voxels()) {
    nlohmann::ordered_json v;
    v["i"] = rec.index.i;
    v["j"] = rec.index.j;
    v["k"] = rec.index.k;
    v["count"] = rec.point_count;
    v["label"] = has_labels ? nlohmann::ordered_json(rec.majority_label)
                           : nlohmann::ordered_json(nullptr);
    auto feat = nlohmann::ordered_json::array();
    for (Eigen::Index c = 0; c < rec.feature.size(); ++c) feat.push_back(rec.feature[c]);
    v["feature"] = std::move(feat);
    arr.push_back(std::move(v));
  }
  return arr;
}

std::vector<VoxelRecord> voxels_from_json(const nlohmann::json& arr, bool has_labels) {
  if (!arr.is_array()) throw format_error("grid: \"voxels\" must be an array");
  std::vector<VoxelRecord> out;
  out.reserve(arr.size());
  for (const auto& v : arr) {
    VoxelRecord rec;
    rec.index = {take<int>(v, "i"), take<int>(v, "j"), take<int>(v, "k")};
    rec.point_count = take<std::uint32_t>(v, "count");
    rec.majority_label = has_labels ? take<std::uint16_t>(v, "label") : 0;
    const auto feat = take<std::vector<float>>(v, "feature");
    rec.feature = Eigen::Map<const Eigen::VectorXf>(feat.data(), feat.size());
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace

nlohmann::ordered_json grid_to_json(const SparseVoxelGrid& grid) {
  nlohmann::ordered_json j;
  j["format"] = kGridFormat;
  j["config"] = config_to_json(grid.config());
  j["has_labels"] = grid.has_labels();
  j["accepted_points"] = grid.accepted_points();
  j["dropped_points"] = grid.dropped_points();
  j["voxels"] = voxels_to_json(grid.level(0), grid.has_labels());
  if (grid.scale_count() > 1) {
    auto scales = nlohmann::ordered_json::array();
    for (int s = 1; s < grid.scale_count(); ++s) {
      const ScaleLevel& level = grid.level(s);
      nlohmann::ordered_json entry;
      entry["level"] = s;
      entry["n_r"] = level.n_r();
      entry["n_phi"] = level.n_phi();
      entry["n_z"] = level.n_z();
      entry["voxels"] = voxels_to_json(level, grid.has_labels());
      scales.push_back(std::move(entry));
    }
    j["coarser_scales"] = std::move(scales);
  }
  return j;
}

SparseVoxelGrid grid_from_json(const nlohmann::json& j) {
  if (take<std::string>(j, "format") != kGridFormat) {
    throw format_error("grid: unsupported format tag");
  }
  const GridConfig config = config_from_json(j.at("config"));
  const bool has_labels = take<bool>(j, "has_labels");
  const auto accepted = take<std::uint64_t>(j, "accepted_points");
  const auto dropped = take<std::uint64_t>(j, "dropped_points");

  const RadialBoundaries base = build_boundaries(config);
  std::vector<ScaleLevel> levels;
  levels.emplace_back(config.n_r, config.n_phi, config.n_z, base,
                      voxels_from_json(j.at("voxels"), has_labels));
  if (j.contains("coarser_scales")) {
    for (const auto& entry : j.at("coarser_scales")) {
      const int s = take<int>(entry, "level");
      levels.emplace_back(config.n_r >> s, config.n_phi >> s, config.n_z >> s,
                          multiscale_boundaries(base, s),
                          voxels_from_json(entry.at("voxels"), has_labels));
    }
  }
  if (static_cast<int>(levels.size()) != config.scales) {
    throw format_error("grid: scale count does not match config");
  }
  return SparseVoxelGrid(config, has_labels, std::move(levels), accepted, dropped);
}

namespace {

template <typename T>
void put(std::ostream& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.write(buf, sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  char buf[sizeof(T)];
  if (!in.read(buf, sizeof(T))) throw format_error("grid binary: truncated stream");
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

}  // namespace

void write_grid_binary(const SparseVoxelGrid& grid, std::ostream& out) {
  char magic[8] = {};
  std::strncpy(magic, kGridFormat, sizeof(magic));
  out.write(magic, sizeof(magic));

  const std::string config = config_to_json(grid.config()).dump();
  put<std::uint32_t>(out, static_cast<std::uint32_t>(config.size()));
  out.write(config.data(), static_cast<std::streamsize>(config.size()));

  const ScaleLevel& finest = grid.level(0);
  const std::uint32_t channels =
      finest.voxels().empty() ? 0u : static_cast<std::uint32_t>(finest.voxels()[0].feature.size());
  put<std::uint32_t>(out, channels);
  put<std::uint8_t>(out, grid.has_labels() ? 1 : 0);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(grid.scale_count()));
  put<std::uint16_t>(out, 0);  // reserved
  put<std::uint64_t>(out, grid.accepted_points());
  put<std::uint64_t>(out, grid.dropped_points());

  for (int s = 0; s < grid.scale_count(); ++s) {
    const ScaleLevel& level = grid.level(s);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(level.n_r()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(level.n_phi()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(level.n_z()));
    put<std::uint64_t>(out, level.voxels().size());
    for (const VoxelRecord& rec : level.voxels()) {
      put<std::uint32_t>(out, static_cast<std::uint32_t>(rec.index.i));
      put<std::uint32_t>(out, static_cast<std::uint32_t>(rec.index.j));
      put<std::uint32_t>(out, static_cast<std::uint32_t>(rec.index.k));
      put<std::uint32_t>(out, rec.point_count);
      put<std::uint32_t>(out, rec.majority_label);
      for (Eigen::Index c = 0; c < rec.feature.size(); ++c) put<float>(out, rec.feature[c]);
    }
  }
}

SparseVoxelGrid read_grid_binary(std::istream& in) {
  char magic[8] = {};
  if (!in.read(magic, sizeof(magic)) || std::strncmp(magic, kGridFormat, sizeof(magic)) != 0) {
    throw format_error("grid binary: bad magic");
  }
  const auto config_len = get<std::uint32_t>(in);
  std::string config_text(config_len, '\0');
  if (!in.read(config_text.data(), config_len)) throw format_error("grid binary: truncated config");
  const GridConfig config = config_from_json(nlohmann::json::parse(config_text));

  const auto channels = get<std::uint32_t>(in);
  const bool has_labels = get<std::uint8_t>(in) != 0;
  const int scale_count = get<std::uint8_t>(in);
  get<std::uint16_t>(in);  // reserved
  const auto accepted = get<std::uint64_t>(in);
  const auto dropped = get<std::uint64_t>(in);
  if (scale_count != config.scales) throw format_error("grid binary: scale count mismatch");

  const RadialBoundaries base = build_boundaries(config);
  std::vector<ScaleLevel> levels;
  for (int s = 0; s < scale_count; ++s) {
    const auto n_r = get<std::uint32_t>(in);
    const auto n_phi = get<std::uint32_t>(in);
    const auto n_z = get<std::uint32_t>(in);
    const auto count = get<std::uint64_t>(in);
    std::vector<VoxelRecord> records;
    records.reserve(count);
    for (std::uint64_t m = 0; m < count; ++m) {
      VoxelRecord rec;
      rec.index.i = static_cast<int>(get<std::uint32_t>(in));
      rec.index.j = static_cast<int>(get<std::uint32_t>(in));
      rec.index.k = static_cast<int>(get<std::uint32_t>(in));
      rec.point_count = get<std::uint32_t>(in);
      rec.majority_label = static_cast<std::uint16_t>(get<std::uint32_t>(in));
      rec.feature.resize(channels);
      for (std::uint32_t c = 0; c < channels; ++c) rec.feature[c] = get<float>(in);
      records.push_back(std::move(rec));
    }
    levels.emplace_back(static_cast<int>(n_r), static_cast<int>(n_phi), static_cast<int>(n_z),
                        multiscale_boundaries(base, s), std::move(records));
  }
  return SparseVoxelGrid(config, has_labels, std::move(levels), accepted, dropped);
}

void save_grid_binary(const SparseVoxelGrid& grid, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open " + path.string() + " for writing");
  write_grid_binary(grid, out);
  if (!out) throw io_error("failed writing " + path.string());
}

SparseVoxelGrid load_grid_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path.string());
  return read_grid_binary(in);
}

namespace {

nlohmann::ordered_json optional_to_json(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

std::optional<double> optional_from_json(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace

nlohmann::ordered_json report_to_json(const AnalysisReport& report) {
  nlohmann::ordered_json j;
  j["format"] = kReportFormat;
  j["scheme"] = report.scheme;
  j["config"] = config_to_json(report.config);
  j["band_edges"] = report.bands.edges;
  j["accepted_points"] = report.accepted_points;
  j["dropped_points"] = report.dropped_points;

  auto bands = nlohmann::ordered_json::array();
  for (int b = 0; b < report.bands.count(); ++b) {
    nlohmann::ordered_json row;
    row["lo"] = report.bands.edges[b];
    row["hi"] = report.bands.edges[b + 1];
    row["nonempty_voxels"] = report.counts.per_band[b];
    row["mean_points_per_cell"] = optional_to_json(report.mean_points_per_cell[b]);
    if (report.encoding) {
      row["points"] = report.encoding->band_points[b];
      row["misencoded"] = report.encoding->band_misencoded[b];
      row["encoding_error"] = optional_to_json(report.encoding->per_band[b]);
    }
    bands.push_back(std::move(row));
  }
  j["per_band"] = std::move(bands);

  nlohmann::ordered_json overall;
  overall["nonempty_voxels"] = report.counts.overall;
  if (report.encoding) {
    overall["points"] = report.encoding->points;
    overall["misencoded"] = report.encoding->misencoded;
    overall["encoding_error"] = report.encoding->overall;
  }
  j["overall"] = std::move(overall);

  nlohmann::ordered_json outside;
  outside["nonempty_voxels"] = report.counts.outside;
  if (report.encoding) {
    outside["points"] = report.encoding->outside_points;
    outside["misencoded"] = report.encoding->outside_misencoded;
  }
  j["outside"] = std::move(outside);

  auto receptive = nlohmann::ordered_json::array();
  for (const auto& [distance, length] : report.receptive) {
    receptive.push_back({{"distance", distance}, {"length", length}});
  }
  j["receptive_length"] = std::move(receptive);
  j["volume_profile"] = report.volume_profile;
  return j;
}

AnalysisReport report_from_json(const nlohmann::json& j) {
  if (take<std::string>(j, "format") != kReportFormat) {
    throw format_error("report: unsupported format tag");
  }
  AnalysisReport rep;
  rep.scheme = take<std::string>(j, "scheme");
  rep.config = config_from_json(j.at("config"));
  rep.bands.edges = take<std::vector<double>>(j, "band_edges");
  rep.bands.validate();
  rep.accepted_points = take<std::uint64_t>(j, "accepted_points");
  rep.dropped_points = take<std::uint64_t>(j, "dropped_points");

  const bool labeled = j.at("overall").contains("encoding_error");
  if (labeled) rep.encoding.emplace();

  const auto& bands = j.at("per_band");
  for (const auto& row : bands) {
    rep.counts.per_band.push_back(take<std::uint64_t>(row, "nonempty_voxels"));
    rep.mean_points_per_cell.push_back(optional_from_json(row.at("mean_points_per_cell")));
    if (labeled) {
      rep.encoding->band_points.push_back(take<std::uint64_t>(row, "points"));
      rep.encoding->band_misencoded.push_back(take<std::uint64_t>(row, "misencoded"));
      rep.encoding->per_band.push_back(optional_from_json(row.at("encoding_error")));
    }
  }
  rep.counts.overall = take<std::uint64_t>(j.at("overall"), "nonempty_voxels");
  rep.counts.outside = take<std::uint64_t>(j.at("outside"), "nonempty_voxels");
  if (labeled) {
    rep.encoding->points = take<std::uint64_t>(j.at("overall"), "points");
    rep.encoding->misencoded = take<std::uint64_t>(j.at("overall"), "misencoded");
    rep.encoding->overall = take<double>(j.at("overall"), "encoding_error");
    rep.encoding->outside_points = take<std::uint64_t>(j.at("outside"), "points");
    rep.encoding->outside_misencoded = take<std::uint64_t>(j.at("outside"), "misencoded");
  }
  for (const auto& row : j.at("receptive_length")) {
    rep.receptive.emplace_back(take<double>(row, "distance"), take<double>(row, "length"));
  }
  rep.volume_profile = take<std::vector<double>>(j, "volume_profile");
  return rep;
}

nlohmann::ordered_json comparison_to_json(const SchemeComparison& cmp) {
  nlohmann::ordered_json j;
  j["format"] = kReportFormat;
  auto reports = nlohmann::ordered_json::array();
  for (const AnalysisReport& rep : cmp.reports) reports.push_back(report_to_json(rep));
  j["reports"] = std::move(reports);
  j["rank_by_encoding_error"] = cmp.rank_by_encoding_error;
  j["rank_by_nonempty"] = cmp.rank_by_nonempty;
  return j;
}

std::string report_csv_header() {
  return "scan,scheme,band,points,misencoded,encoding_error,nonempty_voxels,"
         "mean_points_per_cell\n";
}

namespace {

std::string csv_opt(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

}  // namespace

std::string report_csv_rows(const AnalysisReport& report, const std::string& scan) {
  std::ostringstream os;
  const auto row_prefix = [&](const std::string& band) {
    os << scan << ',' << report.scheme << ',' << band << ',';
  };
  for (int b = 0; b < report.bands.count(); ++b) {
    row_prefix(format_double(report.bands.edges[b]) + "-" +
               format_double(report.bands.edges[b + 1]));
    if (report.encoding) {
      os << report.encoding->band_points[b] << ',' << report.encoding->band_misencoded[b] << ','
         << csv_opt(report.encoding->per_band[b]);
    } else {
      os << ",,";
    }
    os << ',' << report.counts.per_band[b] << ',' << csv_opt(report.mean_points_per_cell[b])
       << '\n';
  }
  row_prefix("overall");
  if (report.encoding) {
    os << report.encoding->points << ',' << report.encoding->misencoded << ','
       << format_double(report.encoding->overall);
  } else {
    os << ",,";
  }
  os << ',' << report.counts.overall << ",\n";

  row_prefix("outside");
  if (report.encoding) {
    os << report.encoding->outside_points << ',' << report.encoding->outside_misencoded << ',';
  } else {
    os << ",,";
  }
  os << ',' << report.counts.outside << ",\n";
  return os.str();
}

}  // namespace nuc

#include "nuc/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "nuc/analysis.hpp"
#include "nuc/io.hpp"
#include "nuc/serialize.hpp"

namespace nuc::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitConfig = 3;
constexpr int kExitInput = 4;
constexpr int kExitFormat = 5;
constexpr int kExitInternal = 6;

constexpr const char* kExitCodeHelp =
    "Exit codes:\n"
    "  0  success\n"
    "  2  usage error (unknown flag, bad invocation)\n"
    "  3  configuration error (invalid parameters)\n"
    "  4  input error (missing or unreadable file)\n"
    "  5  format error (malformed file contents)\n"
    "  6  internal error\n";

[[noreturn]] void usage_error(const std::string& msg) { throw CLI::ValidationError(msg); }

// All grid-shaping flags plus their CLI handles, so resolution can tell
// "explicitly set" from "default".
struct GridFlags {
  std::string config_path;
  std::string scheme;
  double a0 = 0, d = 0, ratio = 0, d_prime = 0;
  std::vector<double> region_bounds;
  std::vector<int> region_counts;
  int nr = 0, nphi = 0, nz = 0, scales = 0;
  double rmax = 0, zmin = 0, zmax = 0;
  std::string oor;

  CLI::Option* o_config = nullptr;
  CLI::Option* o_scheme = nullptr;
  CLI::Option* o_a0 = nullptr;
  CLI::Option* o_d = nullptr;
  CLI::Option* o_ratio = nullptr;
  CLI::Option* o_dprime = nullptr;
  CLI::Option* o_rb = nullptr;
  CLI::Option* o_rc = nullptr;
  CLI::Option* o_nr = nullptr;
  CLI::Option* o_nphi = nullptr;
  CLI::Option* o_nz = nullptr;
  CLI::Option* o_rmax = nullptr;
  CLI::Option* o_zmin = nullptr;
  CLI::Option* o_zmax = nullptr;
  CLI::Option* o_scales = nullptr;
  CLI::Option* o_oor = nullptr;
};

void add_grid_flags(CLI::App* cmd, GridFlags& f, bool with_scheme_params = true) {
  f.o_config = cmd->add_option("--config", f.config_path,
                               "Config file (JSON); inline flags override its values");
  if (with_scheme_params) {
    f.o_scheme = cmd->add_option("--scheme", f.scheme, "Partition scheme")
                     ->check(CLI::IsMember({"uniform", "api", "gpi", "piecewise", "increasing-d"}));
    f.o_a0 = cmd->add_option("--a0", f.a0, "First radial interval (api/gpi/increasing-d)");
    f.o_d = cmd->add_option("--d", f.d, "Common difference (api/increasing-d)");
    f.o_ratio = cmd->add_option("--ratio", f.ratio, "Common ratio (gpi)");
    f.o_dprime = cmd->add_option("--d-prime", f.d_prime, "Growth of the difference (increasing-d)");
    f.o_rb = cmd->add_option("--region-bounds", f.region_bounds,
                             "Piecewise region bounds, e.g. 0,15,30,50")
                 ->delimiter(',');
    f.o_rc = cmd->add_option("--region-counts", f.region_counts,
                             "Piecewise bins per region, must sum to --nr")
                 ->delimiter(',');
  }
  f.o_nr = cmd->add_option("--nr", f.nr, "Radial bins (default 120)");
  f.o_nphi = cmd->add_option("--nphi", f.nphi, "Angular bins (default 360)");
  f.o_nz = cmd->add_option("--nz", f.nz, "Height bins (default 32)");
  f.o_rmax = cmd->add_option("--rmax", f.rmax, "Scene radius bound in meters (default 50)");
  f.o_zmin = cmd->add_option("--zmin", f.zmin,
                             "Lower z bound (default -4; a convention, not from any dataset spec)");
  f.o_zmax = cmd->add_option("--zmax", f.zmax, "Upper z bound (default 2)");
  f.o_scales = cmd->add_option("--scales", f.scales, "Aggregation scales t >= 1 (default 1)");
  f.o_oor = cmd->add_option("--oor", f.oor, "Out-of-range policy (default clamp)")
                ->check(CLI::IsMember({"clamp", "drop"}));
}

PartitionScheme scheme_by_name(const std::string& name) {
  if (name == "uniform") return Uniform{};
  if (name == "api") return Api{};
  if (name == "gpi") return Gpi{};
  if (name == "piecewise") return Piecewise{};
  if (name == "increasing-d") return IncreasingD{};
  throw config_error("unknown scheme \"" + name + "\"");
}

bool given(const CLI::Option* o) { return o != nullptr && o->count() > 0; }

GridConfig resolve_config(const GridFlags& f) {
  GridConfig config;
  if (given(f.o_config)) config = load_config(f.config_path);

  std::string target = scheme_name(config.scheme);
  if (given(f.o_scheme)) target = f.scheme;
  if (target != scheme_name(config.scheme)) config.scheme = scheme_by_name(target);

  const auto applies = [&](const CLI::Option* o, bool ok, const char* flag) {
    if (given(o) && !ok) {
      throw config_error(std::string(flag) + " does not apply to scheme \"" + target + "\"");
    }
    return given(o);
  };
  std::visit(
      [&](auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Api>) {
          if (applies(f.o_a0, true, "--a0")) s.a0 = f.a0;
          if (applies(f.o_d, true, "--d")) s.d = f.d;
        } else if constexpr (std::is_same_v<S, Gpi>) {
          if (applies(f.o_a0, true, "--a0")) s.a0 = f.a0;
          if (applies(f.o_ratio, true, "--ratio")) s.ratio = f.ratio;
        } else if constexpr (std::is_same_v<S, Piecewise>) {
          if (applies(f.o_rb, true, "--region-bounds")) s.region_bounds = f.region_bounds;
          if (applies(f.o_rc, true, "--region-counts")) s.region_counts = f.region_counts;
        } else if constexpr (std::is_same_v<S, IncreasingD>) {
          if (applies(f.o_a0, true, "--a0")) s.a0 = f.a0;
          if (applies(f.o_d, true, "--d")) s.d = f.d;
          if (applies(f.o_dprime, true, "--d-prime")) s.d_prime = f.d_prime;
        }
      },
      config.scheme);
  // Reject leftover flags that the final scheme cannot consume.
  const bool is_api = std::holds_alternative<Api>(config.scheme);
  const bool is_gpi = std::holds_alternative<Gpi>(config.scheme);
  const bool is_pw = std::holds_alternative<Piecewise>(config.scheme);
  const bool is_id = std::holds_alternative<IncreasingD>(config.scheme);
  applies(f.o_a0, is_api || is_gpi || is_id, "--a0");
  applies(f.o_d, is_api || is_id, "--d");
  applies(f.o_ratio, is_gpi, "--ratio");
  applies(f.o_dprime, is_id, "--d-prime");
  applies(f.o_rb, is_pw, "--region-bounds");
  applies(f.o_rc, is_pw, "--region-counts");

  if (given(f.o_nr)) config.n_r = f.nr;
  if (given(f.o_nphi)) config.n_phi = f.nphi;
  if (given(f.o_nz)) config.n_z = f.nz;
  if (given(f.o_rmax)) config.r_max = f.rmax;
  if (given(f.o_zmin)) config.z_min = f.zmin;
  if (given(f.o_zmax)) config.z_max = f.zmax;
  if (given(f.o_scales)) config.scales = f.scales;
  if (given(f.o_oor)) {
    config.out_of_range = f.oor == "drop" ? OutOfRangePolicy::Drop : OutOfRangePolicy::ClampToEdge;
  }
  config.validate();
  return config;
}

void write_text(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw io_error("cannot open " + out_path + " for writing");
  out << text;
  if (!out) throw io_error("failed writing " + out_path);
}

PointCloud load_cloud(const std::string& scan_path, const std::string& label_path,
                      std::uint64_t* rejected = nullptr) {
  LoadedScan scan = read_scan(scan_path);
  if (!label_path.empty()) attach_labels(scan, label_path);
  if (rejected != nullptr) *rejected = scan.rejected_points;
  return std::move(scan.cloud);
}

// ---- subcommand payloads ----------------------------------------------

struct BoundariesCmd {
  GridFlags grid;
  std::string out_path;

  int run() const {
    const GridConfig config = resolve_config(grid);
    const RadialBoundaries b = build_boundaries(config);
    std::ostringstream os;
    os << "# config: " << config_to_json(config).dump() << '\n';
    for (int i = 0; i <= b.bin_count(); ++i) os << format_double(b.edge(i)) << '\n';
    write_text(os.str(), out_path);
    return kExitOk;
  }
};

struct GenSyntheticCmd {
  std::string preset = "kitti";
  std::uint64_t seed = 1;
  int beams = 0, azimuths = 0;
  double max_range = 0, dropout = -1;
  std::string out_path;
  bool no_labels = false;
  CLI::Option *o_beams = nullptr, *o_azimuths = nullptr, *o_max_range = nullptr,
              *o_dropout = nullptr;

  int run() const {
    SynthesisSpec spec = preset == "two-class" ? SynthesisSpec::two_class_boundary(seed)
                                               : SynthesisSpec::kitti_like(seed);
    if (given(o_beams)) spec.beam_count = beams;
    if (given(o_azimuths)) spec.azimuth_samples = azimuths;
    if (given(o_max_range)) spec.max_range = max_range;
    if (given(o_dropout)) spec.dropout_rate = dropout;

    const PointCloud cloud = generate_synthetic(spec);
    write_scan(cloud, out_path);
    std::filesystem::path label_path(out_path);
    label_path.replace_extension(".label");
    if (!no_labels) write_labels(cloud, label_path);

    nlohmann::ordered_json echo;
    echo["preset"] = preset;
    echo["seed"] = spec.seed;
    echo["beam_count"] = spec.beam_count;
    echo["azimuth_samples"] = spec.azimuth_samples;
    echo["max_range"] = spec.max_range;
    echo["dropout_rate"] = spec.dropout_rate;
    echo["points"] = cloud.size();
    echo["scan"] = out_path;
    if (!no_labels) echo["labels"] = label_path.string();
    std::cout << echo.dump() << '\n';
    return kExitOk;
  }
};

struct VoxelizeCmd {
  GridFlags grid;
  std::string scan_path, label_path, out_path;
  std::string format = "json";
  int threads = 1;

  int run() const {
    const GridConfig config = resolve_config(grid);
    const PointCloud cloud = load_cloud(scan_path, label_path);
    const SparseVoxelGrid result = voxelize(cloud, config, threads);
    if (format == "binary") {
      save_grid_binary(result, out_path);
    } else {
      write_text(grid_to_json(result).dump(2) + "\n", out_path);
    }
    return kExitOk;
  }
};

// Mean over per-scan reports; fractional because they are averages.
nlohmann::ordered_json mean_over_scans(const std::vector<AnalysisReport>& reports) {
  const auto& first = reports.front();
  const int n_bands = first.bands.count();
  const double n = static_cast<double>(reports.size());
  const bool labeled = first.encoding.has_value();

  nlohmann::ordered_json j;
  auto bands = nlohmann::ordered_json::array();
  for (int b = 0; b < n_bands; ++b) {
    double voxels = 0, points = 0, mis = 0;
    for (const auto& rep : reports) {
      voxels += static_cast<double>(rep.counts.per_band[b]);
      if (labeled) {
        points += static_cast<double>(rep.encoding->band_points[b]);
        mis += static_cast<double>(rep.encoding->band_misencoded[b]);
      }
    }
    nlohmann::ordered_json row;
    row["lo"] = first.bands.edges[b];
    row["hi"] = first.bands.edges[b + 1];
    row["nonempty_voxels"] = voxels / n;
    if (labeled) {
      row["points"] = points / n;
      row["misencoded"] = mis / n;
      row["encoding_error"] = points > 0 ? mis / points : 0.0;
    }
    bands.push_back(std::move(row));
  }
  j["per_band"] = std::move(bands);

  double voxels = 0, points = 0, mis = 0;
  for (const auto& rep : reports) {
    voxels += static_cast<double>(rep.counts.overall);
    if (labeled) {
      points += static_cast<double>(rep.encoding->points);
      mis += static_cast<double>(rep.encoding->misencoded);
    }
  }
  nlohmann::ordered_json overall;
  overall["nonempty_voxels"] = voxels / n;
  if (labeled) {
    overall["points"] = points / n;
    overall["misencoded"] = mis / n;
    overall["encoding_error"] = points > 0 ? mis / points : 0.0;
  }
  j["overall"] = std::move(overall);
  return j;
}

// Mean non-empty voxel counts measured on SemanticKITTI sequence 08 for three
// reference setups, printed next to measured numbers on request.
struct ReferenceCounts {
  const char* name;
  double per_band[5];
  double overall;
};
constexpr ReferenceCounts kKittiSeq08Reference[] = {
    {"api-120x360x32", {9516.8, 6662.4, 2719.8, 1370.2, 745.9}, 21015.1},
    {"uniform-120x360x32", {7525.2, 6642.1, 2999.3, 1574.1, 873.1}, 19613.8},
    {"uniform-480x360x32", {15914.6, 11714.4, 4927.3, 2366.7, 1250.0}, 36173.1},
};

std::string reference_key(const GridConfig& config) {
  std::ostringstream os;
  os << scheme_name(config.scheme) << "-" << config.n_r << "x" << config.n_phi << "x"
     << config.n_z;
  return os.str();
}

struct AnalyzeCmd {
  GridFlags grid;
  std::string input_path, label_path, out_path;
  std::string format = "json";
  std::vector<double> band_edges;
  int threads = 1;
  bool reference = false;
  bool exclude_ignore = false;
  CLI::Option* o_bands = nullptr;

  int run() const {
    const GridConfig config = resolve_config(grid);
    DistanceBands bands;
    if (given(o_bands)) bands.edges = band_edges;
    bands.validate();

    std::vector<std::pair<std::string, AnalysisReport>> rows;
    if (std::filesystem::is_directory(input_path)) {
      std::vector<std::filesystem::path> scans;
      for (const auto& entry : std::filesystem::directory_iterator(input_path)) {
        if (entry.path().extension() == ".bin") scans.push_back(entry.path());
      }
      std::sort(scans.begin(), scans.end());
      if (scans.empty()) throw io_error("no .bin scans under " + input_path);
      for (const auto& scan : scans) {
        std::string labels;
        if (!label_path.empty()) {
          labels = (std::filesystem::path(label_path) / scan.stem()).string() + ".label";
        }
        const PointCloud cloud = load_cloud(scan.string(), labels);
        rows.emplace_back(scan.stem().string(),
                          analyze(cloud, config, bands, threads, exclude_ignore));
      }
    } else {
      const PointCloud cloud = load_cloud(input_path, label_path);
      rows.emplace_back(std::filesystem::path(input_path).stem().string(),
                        analyze(cloud, config, bands, threads, exclude_ignore));
    }

    std::vector<AnalysisReport> reports;
    reports.reserve(rows.size());
    for (auto& [name, rep] : rows) reports.push_back(rep);

    if (format == "csv") {
      std::ostringstream os;
      os << "# config: " << config_to_json(config).dump() << '\n';
      os << report_csv_header();
      for (const auto& [name, rep] : rows) os << report_csv_rows(rep, name);
      if (rows.size() > 1) {
        const auto mean = mean_over_scans(reports);
        for (const auto& row : mean.at("per_band")) {
          os << "mean," << reports[0].scheme << ','
             << format_double(row.at("lo").get<double>()) << '-'
             << format_double(row.at("hi").get<double>()) << ',';
          if (row.contains("points")) {
            os << format_double(row.at("points").get<double>()) << ','
               << format_double(row.at("misencoded").get<double>()) << ','
               << format_double(row.at("encoding_error").get<double>());
          } else {
            os << ",,";
          }
          os << ',' << format_double(row.at("nonempty_voxels").get<double>()) << ",\n";
        }
      }
      write_text(os.str(), out_path);
    } else {
      nlohmann::ordered_json j;
      j["format"] = kReportFormat;
      j["config"] = config_to_json(config);
      if (rows.size() == 1) {
        j["report"] = report_to_json(rows[0].second);
      } else {
        auto scans = nlohmann::ordered_json::array();
        for (const auto& [name, rep] : rows) {
          nlohmann::ordered_json entry;
          entry["scan"] = name;
          entry["report"] = report_to_json(rep);
          scans.push_back(std::move(entry));
        }
        j["scans"] = std::move(scans);
        j["mean"] = mean_over_scans(reports);
      }
      if (reference) {
        const std::string key = reference_key(config);
        for (const ReferenceCounts& ref : kKittiSeq08Reference) {
          if (key == ref.name) {
            nlohmann::ordered_json r;
            r["setup"] = ref.name;
            r["per_band"] = std::vector<double>(ref.per_band, ref.per_band + 5);
            r["overall"] = ref.overall;
            j["reference_counts"] = std::move(r);
          }
        }
      }
      write_text(j.dump(2) + "\n", out_path);
    }
    return kExitOk;
  }
};

struct CompareCmd {
  GridFlags grid;
  std::string scan_path, label_path, out_path;
  std::string format = "csv";
  std::vector<std::string> schemes{"uniform", "api", "gpi", "piecewise", "increasing-d"};
  std::vector<double> band_edges;
  int threads = 1;
  bool exclude_ignore = false;
  CLI::Option* o_bands = nullptr;

  PartitionScheme preset(const std::string& name, int n_r) const {
    if (name == "uniform") return Uniform{};
    if (name == "api") return Api{0.05, 0.0062};
    if (name == "gpi") return Gpi{0.05, 1.0541};
    if (name == "increasing-d") return IncreasingD{0.05, 0.0052, 0.000025};
    if (name == "piecewise") {
      if (n_r % 12 != 0) {
        throw config_error("piecewise preset splits bins 8:3:1 and needs --nr divisible by 12");
      }
      const int unit = n_r / 12;
      return Piecewise{{0.0, 15.0, 30.0, 50.0}, {8 * unit, 3 * unit, unit}};
    }
    throw config_error("unknown scheme \"" + name + "\" in --schemes");
  }

  int run() const {
    const GridConfig base = resolve_config(grid);
    DistanceBands bands;
    if (given(o_bands)) bands.edges = band_edges;
    bands.validate();

    std::vector<GridConfig> configs;
    configs.reserve(schemes.size());
    for (const std::string& name : schemes) {
      GridConfig config = base;
      config.scheme = preset(name, base.n_r);
      config.validate();
      configs.push_back(std::move(config));
    }

    const PointCloud cloud = load_cloud(scan_path, label_path);
    const SchemeComparison cmp =
        compare_schemes(cloud, configs, bands, threads, exclude_ignore);

    if (format == "csv") {
      std::ostringstream os;
      for (const auto& rep : cmp.reports) {
        os << "# config: " << config_to_json(rep.config).dump() << '\n';
      }
      os << report_csv_header();
      for (const auto& rep : cmp.reports) os << report_csv_rows(rep);
      const auto rank_names = [&](const std::vector<int>& rank) {
        std::string names;
        for (int c : rank) names += (names.empty() ? "" : " ") + cmp.reports[c].scheme;
        return names;
      };
      if (!cmp.rank_by_encoding_error.empty()) {
        os << "# rank_by_encoding_error: " << rank_names(cmp.rank_by_encoding_error) << '\n';
      }
      os << "# rank_by_nonempty: " << rank_names(cmp.rank_by_nonempty) << '\n';
      write_text(os.str(), out_path);
    } else {
      write_text(comparison_to_json(cmp).dump(2) + "\n", out_path);
    }
    return kExitOk;
  }
};

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Non-uniform cylindrical voxel grids for LiDAR point clouds"};
  app.require_subcommand(1);
  app.footer(kExitCodeHelp);

  BoundariesCmd boundaries;
  auto* cmd_b = app.add_subcommand("boundaries", "Print the radial boundary sequence");
  add_grid_flags(cmd_b, boundaries.grid);
  cmd_b->add_option("--out", boundaries.out_path, "Write to file instead of stdout");

  GenSyntheticCmd gen;
  auto* cmd_g = app.add_subcommand("gen-synthetic", "Write a synthetic scan (.bin + .label)");
  cmd_g->add_option("--preset", gen.preset, "Scene preset (default kitti)")
      ->check(CLI::IsMember({"kitti", "two-class"}));
  cmd_g->add_option("--seed", gen.seed, "RNG seed (default 1)");
  gen.o_beams = cmd_g->add_option("--beams", gen.beams, "Beam count");
  gen.o_azimuths = cmd_g->add_option("--azimuths", gen.azimuths, "Azimuth samples per beam");
  gen.o_max_range = cmd_g->add_option("--max-range", gen.max_range, "Maximum range in meters");
  gen.o_dropout = cmd_g->add_option("--dropout", gen.dropout, "Dropout rate in [0,1)");
  cmd_g->add_option("--out", gen.out_path, "Output .bin path")->required();
  cmd_g->add_flag("--no-labels", gen.no_labels, "Skip the .label sidecar");

  VoxelizeCmd vox;
  auto* cmd_v = app.add_subcommand("voxelize", "Build a sparse voxel grid from a scan");
  cmd_v->add_option("scan", vox.scan_path, "Input .bin scan")->required();
  cmd_v->add_option("--labels", vox.label_path, "Input .label file");
  add_grid_flags(cmd_v, vox.grid);
  cmd_v->add_option("--out", vox.out_path, "Output grid path")->required();
  cmd_v->add_option("--format", vox.format, "Output format (default json)")
      ->check(CLI::IsMember({"json", "binary"}));
  cmd_v->add_option("--threads", vox.threads, "Worker threads (default 1)")
      ->envname("NUC_THREADS");

  AnalyzeCmd ana;
  auto* cmd_a = app.add_subcommand("analyze", "Per-band diagnostics for a scan or directory");
  cmd_a->add_option("input", ana.input_path, "A .bin scan or a directory of scans")->required();
  cmd_a->add_option("--labels", ana.label_path, "A .label file, or a directory when input is one");
  add_grid_flags(cmd_a, ana.grid);
  ana.o_bands = cmd_a->add_option("--bands", ana.band_edges,
                                  "Distance band edges (default 0,10,20,30,40,50)")
                    ->delimiter(',');
  cmd_a->add_option("--out", ana.out_path, "Write to file instead of stdout");
  cmd_a->add_option("--format", ana.format, "json or csv (default json)")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd_a->add_flag("--exclude-ignore", ana.exclude_ignore,
                  "Leave class 0 out of the encoding-error tallies");
  cmd_a->add_flag("--reference", ana.reference,
                  "Also print reference SemanticKITTI seq-08 voxel counts when the "
                  "configuration matches a known setup");
  cmd_a->add_option("--threads", ana.threads, "Worker threads (default 1)")
      ->envname("NUC_THREADS");

  CompareCmd cmp;
  auto* cmd_c = app.add_subcommand("compare", "Side-by-side scheme comparison on one scan");
  cmd_c->add_option("scan", cmp.scan_path, "Input .bin scan")->required();
  cmd_c->add_option("--labels", cmp.label_path, "Input .label file");
  cmd_c->add_option("--schemes", cmp.schemes,
                    "Schemes to compare (default uniform,api,gpi,piecewise,increasing-d)")
      ->delimiter(',');
  add_grid_flags(cmd_c, cmp.grid, /*with_scheme_params=*/false);
  cmp.o_bands = cmd_c->add_option("--bands", cmp.band_edges,
                                  "Distance band edges (default 0,10,20,30,40,50)")
                    ->delimiter(',');
  cmd_c->add_option("--out", cmp.out_path, "Write to file instead of stdout");
  cmd_c->add_option("--format", cmp.format, "csv or json (default csv)")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd_c->add_flag("--exclude-ignore", cmp.exclude_ignore,
                  "Leave class 0 out of the encoding-error tallies");
  cmd_c->add_option("--threads", cmp.threads, "Worker threads (default 1)")
      ->envname("NUC_THREADS");

  try {
    app.parse(argc, argv);
    if (cmd_b->parsed()) return boundaries.run();
    if (cmd_g->parsed()) return gen.run();
    if (cmd_v->parsed()) return vox.run();
    if (cmd_a->parsed()) return ana.run();
    if (cmd_c->parsed()) return cmp.run();
    usage_error("no subcommand given");
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error[usage]: " << e.what() << '\n';
    return kExitUsage;
  } catch (const config_error& e) {
    std::cerr << "error[config]: " << e.what() << '\n';
    return kExitConfig;
  } catch (const format_error& e) {
    std::cerr << "error[format]: " << e.what() << '\n';
    return kExitFormat;
  } catch (const io_error& e) {
    std::cerr << "error[input]: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace nuc::cli

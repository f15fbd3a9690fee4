#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nuc/cli.hpp"

namespace {

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"nucgrid"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return nuc::cli::run(static_cast<int>(argv.size()), argv.data());
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("nuc_cli_" + name);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("boundaries subcommand prints the full edge sequence") {
  const auto out = temp_path("edges.txt");
  REQUIRE(run_cli({"boundaries", "--scheme", "api", "--a0", "0.05", "--d", "0.0062", "--nr",
                   "120", "--out", out.string()}) == 0);
  const std::string text = read_file(out);
  std::istringstream lines(text);
  std::string line, last;
  int data_lines = 0;
  std::getline(lines, line);
  CHECK(line.rfind("# config:", 0) == 0);  // resolved config echo
  while (std::getline(lines, line)) {
    if (!line.empty()) {
      last = line;
      ++data_lines;
    }
  }
  CHECK(data_lines == 121);
  CHECK(last == "50.268");
  std::filesystem::remove(out);
}

TEST_CASE("voxelize on an empty cloud writes a zero-voxel grid") {
  const auto scan = temp_path("empty.bin");
  {
    std::ofstream touch(scan, std::ios::binary);
  }
  const auto out = temp_path("empty_grid.json");
  REQUIRE(run_cli({"voxelize", scan.string(), "--out", out.string()}) == 0);
  const auto j = nlohmann::json::parse(read_file(out));
  CHECK(j.at("format") == "NUCVOX1");
  CHECK(j.at("voxels").size() == 0);
  CHECK(j.at("config").at("scheme") == "api");
  std::filesystem::remove(scan);
  std::filesystem::remove(out);
}

TEST_CASE("gen-synthetic then compare is deterministic byte for byte") {
  const auto scan = temp_path("scene.bin");
  const auto label = temp_path("scene.label");
  REQUIRE(run_cli({"gen-synthetic", "--preset", "two-class", "--seed", "42", "--out",
                   scan.string()}) == 0);
  REQUIRE(std::filesystem::exists(label));

  const auto csv1 = temp_path("cmp1.csv");
  const auto csv2 = temp_path("cmp2.csv");
  const std::vector<std::string> cmp_args{"compare",  scan.string(),
                                          "--labels", label.string(),
                                          "--schemes", "uniform,api",
                                          "--format", "csv"};
  auto with_out = [&](const std::filesystem::path& p) {
    auto args = cmp_args;
    args.push_back("--out");
    args.push_back(p.string());
    return args;
  };
  REQUIRE(run_cli(with_out(csv1)) == 0);
  REQUIRE(run_cli(with_out(csv2)) == 0);
  const std::string a = read_file(csv1);
  CHECK(a == read_file(csv2));
  CHECK(a.find("# config:") != std::string::npos);
  CHECK(a.find("# rank_by_encoding_error:") != std::string::npos);
  CHECK(a.find("uniform") != std::string::npos);
  CHECK(a.find("api") != std::string::npos);

  for (const auto& p : {scan, label, csv1, csv2}) std::filesystem::remove(p);
}

TEST_CASE("analyze emits a report json with embedded config") {
  const auto scan = temp_path("ana.bin");
  const auto label = temp_path("ana.label");
  REQUIRE(run_cli({"gen-synthetic", "--seed", "7", "--azimuths", "600", "--out",
                   scan.string()}) == 0);
  const auto out = temp_path("report.json");
  REQUIRE(run_cli({"analyze", scan.string(), "--labels", label.string(), "--out",
                   out.string()}) == 0);
  const auto j = nlohmann::json::parse(read_file(out));
  CHECK(j.at("format") == "NUCREPORT1");
  CHECK(j.at("config").at("n_r") == 120);
  CHECK(j.at("report").at("overall").contains("encoding_error"));
  for (const auto& p : {scan, label, out}) std::filesystem::remove(p);
}

TEST_CASE("analyze over a directory adds per-scan and mean rows") {
  const auto dir = temp_path("seq");
  const auto labels_dir = temp_path("seq_labels");
  std::filesystem::create_directories(dir);
  std::filesystem::create_directories(labels_dir);
  for (int s = 0; s < 2; ++s) {
    const auto scan = dir / (std::to_string(s) + ".bin");
    REQUIRE(run_cli({"gen-synthetic", "--seed", std::to_string(100 + s), "--azimuths", "400",
                     "--out", scan.string()}) == 0);
    std::filesystem::rename(dir / (std::to_string(s) + ".label"),
                            labels_dir / (std::to_string(s) + ".label"));
  }
  const auto out = temp_path("seq.csv");
  REQUIRE(run_cli({"analyze", dir.string(), "--labels", labels_dir.string(), "--format", "csv",
                   "--out", out.string()}) == 0);
  const std::string text = read_file(out);
  CHECK(text.find("0,api,") != std::string::npos);
  CHECK(text.find("1,api,") != std::string::npos);
  CHECK(text.find("mean,api,") != std::string::npos);
  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(labels_dir);
  std::filesystem::remove(out);
}

TEST_CASE("cli failures use distinct exit codes") {
  CHECK(run_cli({"voxelize"}) == 2);                       // missing required args
  CHECK(run_cli({"no-such-command"}) == 2);                // unknown subcommand
  CHECK(run_cli({"boundaries", "--scheme", "bogus"}) == 2);  // bad enum value

  const auto out = temp_path("unused.json");
  CHECK(run_cli({"voxelize", temp_path("missing.bin").string(), "--out", out.string()}) == 4);

  // config error: piecewise counts must sum to nr
  CHECK(run_cli({"boundaries", "--scheme", "piecewise", "--region-counts", "1,1,1"}) == 3);
  // config error: flag for the wrong scheme
  CHECK(run_cli({"boundaries", "--scheme", "api", "--ratio", "1.05"}) == 3);

  // format error: ragged scan file
  const auto ragged = temp_path("ragged.bin");
  {
    std::ofstream f(ragged, std::ios::binary);
    f.write("12345678901234567", 17);
  }
  CHECK(run_cli({"voxelize", ragged.string(), "--out", out.string()}) == 5);
  std::filesystem::remove(ragged);
}

TEST_CASE("drop policy and no-labels flags flow through the cli") {
  const auto scan = temp_path("droppy.bin");
  REQUIRE(run_cli({"gen-synthetic", "--seed", "3", "--azimuths", "200", "--no-labels", "--out",
                   scan.string()}) == 0);
  CHECK_FALSE(std::filesystem::exists(temp_path("droppy.label")));

  const auto out = temp_path("droppy.json");
  REQUIRE(run_cli({"voxelize", scan.string(), "--oor", "drop", "--rmax", "30", "--scheme",
                   "uniform", "--out", out.string()}) == 0);
  const auto j = nlohmann::json::parse(read_file(out));
  CHECK(j.at("config").at("out_of_range") == "drop");
  CHECK(j.at("dropped_points").get<std::uint64_t>() > 0);
  CHECK(j.at("has_labels") == false);
  std::filesystem::remove(scan);
  std::filesystem::remove(out);
}

TEST_CASE("config file values are overridden by inline flags") {
  const auto cfg = temp_path("cfg.json");
  {
    std::ofstream f(cfg);
    f << R"({"scheme":"api","a0":0.05,"d":0.0062,"n_r":120,"n_phi":360,"n_z":32,)"
      << R"("z_min":-4.0,"z_max":2.0,"r_max":50.0,"scales":1,"out_of_range":"clamp"})";
  }
  const auto out = temp_path("cfg_edges.txt");
  REQUIRE(run_cli({"boundaries", "--config", cfg.string(), "--nr", "60", "--out",
                   out.string()}) == 0);
  const std::string text = read_file(out);
  CHECK(text.find("\"n_r\":60") != std::string::npos);
  std::istringstream lines(text);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    if (!line.empty() && line[0] != '#') ++count;
  }
  CHECK(count == 61);
  std::filesystem::remove(cfg);
  std::filesystem::remove(out);
}

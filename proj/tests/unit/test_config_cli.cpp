#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "colonpose/cli.hpp"
#include "colonpose/dataset.hpp"

using namespace colonpose;
namespace fs = std::filesystem;

namespace {

std::string fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

int run(std::vector<std::string> args) {
  std::vector<const char*> argv = {"colonpose"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("key=value configs parse, override, and reject unknown keys") {
  const std::string dir = fresh_dir("colonpose_cfg");
  const std::string path = dir + "/c.cfg";
  {
    std::ofstream out(path);
    out << "# comment\n"
        << "alpha = 3.5\n"
        << "name=hello\n"
        << "flag=true\n"
        << "list=1, 2,3\n";
  }
  KeyValueConfig cfg = KeyValueConfig::from_file(path);
  CHECK(cfg.get_double("alpha", 0) == 3.5);
  CHECK(cfg.get_string("name", "") == "hello");
  CHECK(cfg.get_bool("flag", false));
  CHECK(cfg.get_int_list("list", {}) == std::vector<int>{1, 2, 3});
  CHECK(cfg.get_int("missing", 7) == 7);
  CHECK_NOTHROW(cfg.reject_unknown());

  cfg.apply_override("alpha=4");
  CHECK(cfg.get_double("alpha", 0) == 4.0);
  CHECK_THROWS_AS(cfg.apply_override("notanassignment"), ConfigError);

  cfg.set("mystery", "1");
  CHECK_THROWS_WITH_AS(cfg.reject_unknown(), doctest::Contains("mystery"), ConfigError);

  {
    std::ofstream out(path);
    out << "badline\n";
  }
  CHECK_THROWS_AS(KeyValueConfig::from_file(path), ConfigError);
  CHECK_THROWS_AS(KeyValueConfig::from_file(dir + "/nope.cfg"), ConfigError);
}

TEST_CASE("typed getters validate values") {
  KeyValueConfig cfg;
  cfg.set("x", "abc");
  CHECK_THROWS_AS(cfg.get_double("x", 0), ConfigError);
  cfg.set("y", "1.5");
  CHECK_THROWS_AS(cfg.get_int("y", 0), ConfigError);
  cfg.set("z", "maybe");
  CHECK_THROWS_AS(cfg.get_bool("z", false), ConfigError);
}

TEST_CASE("cli exit codes: 2 for config errors, 3 for I/O errors") {
  CHECK(run({"generate", "--out", fresh_dir("colonpose_cli_badkey"), "mystery=1"}) == 2);
  CHECK(run({"eval", "--out", fresh_dir("colonpose_cli_missing"), "gt=/nonexistent/a.txt",
             "pred=/nonexistent/b.txt"}) == 3);
  CHECK(run({"train", "--out", fresh_dir("colonpose_cli_nodata")}) == 2);
}

TEST_CASE("generate is deterministic and honors the resolution flag") {
  const std::string out1 = fresh_dir("colonpose_cli_gen1");
  const std::string out2 = fresh_dir("colonpose_cli_gen2");
  const std::vector<std::string> base = {"generate", "--frames", "6", "--seed", "7",
                                         "trajectories=1", "resolution=32"};
  auto with_out = [&](const std::string& o) {
    auto v = base;
    v.push_back("--out");
    v.push_back(o);
    return v;
  };
  REQUIRE(run(with_out(out1)) == 0);
  REQUIRE(run(with_out(out2)) == 0);
  CHECK(slurp(out1 + "/manifest.txt") == slurp(out2 + "/manifest.txt"));
  CHECK(slurp(out1 + "/traj_00/poses.txt") == slurp(out2 + "/traj_00/poses.txt"));
  CHECK(slurp(out1 + "/traj_00/frame_00002.ppm") == slurp(out2 + "/traj_00/frame_00002.ppm"));
  CHECK(fs::exists(out1 + "/run_manifest.txt"));

  // resolution lands in intrinsics.txt
  const std::string out3 = fresh_dir("colonpose_cli_gen3");
  REQUIRE(run({"generate", "--frames", "2", "--resolution", "48", "--out", out3,
               "trajectories=1", "render=0"}) == 0);
  const Intrinsics k = read_intrinsics_file(out3 + "/traj_00/intrinsics.txt");
  CHECK(k.width == 48);
  CHECK(k.height == 48);
  CHECK(k.cx == doctest::Approx(24.0));
}

TEST_CASE("eval on identical files reports zeros and writes csv outputs") {
  const std::string dir = fresh_dir("colonpose_cli_eval");
  GeneratorConfig g;
  g.n_trajectories = 1;
  g.trajectory.frames = 30;
  g.resolution = 32;
  g.render_images = false;
  g.seed = 3;
  generate_dataset(g, dir + "/ds");

  const std::string out = dir + "/eval";
  REQUIRE(run({"eval", "--out", out, "gt=" + dir + "/ds/traj_00/poses.txt",
               "pred=" + dir + "/ds/traj_00/poses.txt", "--k", "5"}) == 0);
  const std::string metrics = slurp(out + "/metrics.csv");
  CHECK(metrics.find("trajectory,direction,ate_cm") == 0);
  CHECK(metrics.find("run,forward,0,0,0,100,1,") != std::string::npos);
  CHECK(fs::exists(out + "/histogram.csv"));

  // byte-identical on a second run
  const std::string out2 = dir + "/eval2";
  REQUIRE(run({"eval", "--out", out2, "gt=" + dir + "/ds/traj_00/poses.txt",
               "pred=" + dir + "/ds/traj_00/poses.txt", "--k", "5"}) == 0);
  CHECK(slurp(out + "/metrics.csv") == slurp(out2 + "/metrics.csv"));
  CHECK(slurp(out + "/histogram.csv") == slurp(out2 + "/histogram.csv"));
}

TEST_CASE("train, predict, and eval chain on a tiny dataset") {
  const std::string dir = fresh_dir("colonpose_cli_chain");
  REQUIRE(run({"generate", "--out", dir + "/ds", "--frames", "16", "--seed", "5",
               "trajectories=2", "resolution=32"}) == 0);

  // desk-size model settings live in the config file
  const std::string cfg_path = dir + "/train.cfg";
  {
    std::ofstream out(cfg_path);
    out << "data=" << dir << "/ds\nsteps=4\nbatch=2\nval_every=2\nlog_every=1\nk=5\n";
  }
  REQUIRE(run({"train", "--config", cfg_path, "--out", dir + "/run", "--mode", "bimodal",
               "--seed", "1"}) == 0);
  REQUIRE(fs::exists(dir + "/run/checkpoint.bin"));
  REQUIRE(fs::exists(dir + "/run/curve.csv"));

  // same seed reproduces the training curve byte for byte
  REQUIRE(run({"train", "--config", cfg_path, "--out", dir + "/run2", "--mode", "bimodal",
               "--seed", "1"}) == 0);
  CHECK(slurp(dir + "/run/curve.csv") == slurp(dir + "/run2/curve.csv"));

  REQUIRE(run({"predict", "--out", dir + "/pred", "checkpoint=" + dir + "/run/checkpoint.bin",
               "data=" + dir + "/ds", "traj=1"}) == 0);
  REQUIRE(fs::exists(dir + "/pred/pred_forward.txt"));
  const auto pred = read_pose_file(dir + "/pred/pred_forward.txt");
  const auto gt = read_pose_file(dir + "/ds/traj_01/poses.txt");
  CHECK(pred.size() == gt.size());

  REQUIRE(run({"eval", "--out", dir + "/metrics", "gt=" + dir + "/ds/traj_01/poses.txt",
               "pred=" + dir + "/pred/pred_forward.txt",
               "pred_backward=" + dir + "/pred/pred_backward.txt", "--k", "5"}) == 0);
  CHECK(fs::exists(dir + "/metrics/metrics.csv"));

  // checkpoint/dataset resolution mismatch is a config error
  REQUIRE(run({"generate", "--out", dir + "/ds48", "--frames", "12", "--seed", "5",
               "trajectories=1", "resolution=48"}) == 0);
  CHECK(run({"predict", "--out", dir + "/predbad", "checkpoint=" + dir + "/run/checkpoint.bin",
             "data=" + dir + "/ds48", "traj=0"}) == 2);
}

TEST_CASE("warp-study runs on a tiny dataset and writes its csv") {
  const std::string dir = fresh_dir("colonpose_cli_ws");
  REQUIRE(run({"generate", "--out", dir + "/ds", "--frames", "12", "--seed", "2",
               "trajectories=1", "resolution=32"}) == 0);
  REQUIRE(run({"warp-study", "--out", dir + "/ws", "data=" + dir + "/ds", "pairs=4",
               "dump_pairs=1", "--k", "5"}) == 0);
  const std::string csv = slurp(dir + "/ws/warp_study.csv");
  CHECK(csv.find("image_id,l_r_gt") == 0);
  // two warped images per pair
  CHECK(std::count(csv.begin(), csv.end(), '\n') >= 8);
  bool found_dump = false;
  for (const auto& e : fs::directory_iterator(dir + "/ws"))
    found_dump = found_dump || e.path().string().find("warp_gt.ppm") != std::string::npos;
  CHECK(found_dump);

  // dataset without images is rejected
  REQUIRE(run({"generate", "--out", dir + "/ds_noimg", "--frames", "12", "--seed", "2",
               "trajectories=1", "resolution=32", "render=0"}) == 0);
  CHECK(run({"warp-study", "--out", dir + "/ws2", "data=" + dir + "/ds_noimg"}) == 3);
}

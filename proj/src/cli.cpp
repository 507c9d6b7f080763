#include "colonpose/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "colonpose/metrics.hpp"
#include "colonpose/train.hpp"
#include "colonpose/version.hpp"
#include "colonpose/warp_study.hpp"

namespace fs = std::filesystem;

namespace colonpose {

namespace {

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory: " + dir);
}

void write_run_manifest(const std::string& out_dir, const std::string& subcommand,
                        const KeyValueConfig& cfg) {
  std::ofstream out(out_dir + "/run_manifest.txt");
  if (!out) throw IoError("cannot write run manifest in " + out_dir);
  out << "subcommand=" << subcommand << "\nversion=" << kVersion << "\n" << cfg.resolved_text();
}

void write_lines(const std::string& path, const std::string& header,
                 const std::vector<std::string>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << header << '\n';
  for (const auto& r : rows) out << r << '\n';
}

GeneratorConfig generator_config_from(const KeyValueConfig& cfg) {
  GeneratorConfig g;
  g.seed = cfg.get_u64("seed", 1);
  g.n_trajectories = cfg.get_int("trajectories", 1);
  g.resolution = cfg.get_int("resolution", 128);
  g.k = cfg.get_int("k", 5);
  g.render_images = cfg.get_bool("render", true);
  g.far_cap = cfg.get_double("far_cap", 30.0);
  g.lights.offset = cfg.get_double("light_offset", 0.3);
  g.lights.intensity = cfg.get_double("light_intensity", 2.5);

  g.scene.n_waypoints = cfg.get_int("waypoints", 18);
  g.scene.tube_length = cfg.get_double("tube_length", 110.0);
  g.scene.base_radius = cfg.get_double("base_radius", 2.5);
  g.scene.fold_amplitude = cfg.get_double("fold_amplitude", 1.0);
  g.scene.fold_frequency = cfg.get_double("fold_frequency", 0.4);
  g.scene.fold_sharpness = cfg.get_int("fold_sharpness", 8);

  g.trajectory.n_waypoints = g.scene.n_waypoints;
  g.trajectory.frames = cfg.get_int("frames", 0);
  g.trajectory.frames_per_segment = cfg.get_int("frames_per_segment", 59);
  g.trajectory.step_size_mean = cfg.get_double("step_size_mean", 0.088);
  g.trajectory.roll_rate = cfg.get_double("roll_rate", 0.75);
  g.trajectory.max_wp_translation = cfg.get_double("max_wp_translation", 0.2);
  g.trajectory.max_wp_rotation = cfg.get_double("max_wp_rotation", 20.0);
  g.trajectory.include_reinsertion = cfg.get_bool("reinsertion", true);
  return g;
}

}  // namespace

void cmd_generate(const KeyValueConfig& cfg, const std::string& out_dir) {
  const GeneratorConfig g = generator_config_from(cfg);
  cfg.reject_unknown();
  ensure_dir(out_dir);

  const DatasetManifest manifest =
      generate_dataset(g, out_dir, [](const std::string& msg) { std::cout << msg << "\n"; });

  std::cout << "dataset: " << manifest.trajectories.size() << " trajectories under " << out_dir
            << "\n";
  const auto trajs = load_dataset(out_dir);
  for (const auto& t : trajs) {
    const DatasetStats st = dataset_stats(t.poses, g.k);
    std::cout << t.name << ": frames=" << t.poses.size() << " pairs(k=" << g.k << ")="
              << st.n_pairs << " mean_step_cm=" << st.mean_step_cm
              << " mean_rot_deg=" << st.mean_rot_deg << " tz_neg=" << st.frac_tz_neg
              << " tz_pos=" << st.frac_tz_pos << " bimodal=" << (st.bimodal() ? "yes" : "no")
              << "\n";
  }
  write_run_manifest(out_dir, "generate", cfg);
}

void cmd_train(const KeyValueConfig& cfg, const std::string& out_dir) {
  const std::string data_dir = cfg.get_string("data", "");
  if (data_dir.empty()) throw ConfigError("train: missing 'data' (dataset directory)");
  const Mode mode = mode_from_string(cfg.get_string("mode", "bimodal"));
  const int k = cfg.get_int("k", 5);

  ModelConfig mc;
  mc.bimodal = BimodalConfig::for_k(k, mode);
  const double bin = cfg.get_double("bin", 0.1 * k);
  mc.bimodal.bin1 = -bin;
  mc.bimodal.bin2 = bin;
  mc.dropout = cfg.get_double("dropout", 0.5);

  TrainConfig tc;
  tc.seed = cfg.get_u64("seed", 1);
  tc.lr = cfg.get_double("lr", 0.05);
  tc.momentum = cfg.get_double("momentum", 0.9);
  tc.batch_size = cfg.get_int("batch", 6);
  tc.steps = cfg.get_int("steps", 600);
  tc.w_c = cfg.get_double("w_c", 0.1);
  tc.log_every = cfg.get_int("log_every", 20);
  tc.val_every = cfg.get_int("val_every", 100);
  tc.val_cap = cfg.get_int("val_cap", 250);
  tc.both_directions = cfg.get_bool("both_directions", true);

  const auto all = load_dataset(data_dir);
  if (all.empty()) throw IoError("train: dataset is empty: " + data_dir);
  std::vector<int> default_train, default_val;
  for (int i = 0; i + 1 < static_cast<int>(all.size()); ++i) default_train.push_back(i);
  if (default_train.empty()) default_train.push_back(0);
  default_val.push_back(static_cast<int>(all.size()) - 1);
  const std::vector<int> train_idx = cfg.get_int_list("train_trajs", default_train);
  const std::vector<int> val_idx = cfg.get_int_list("val_trajs", default_val);
  cfg.reject_unknown();

  auto select = [&](const std::vector<int>& idx) {
    std::vector<LoadedTrajectory> out;
    for (int i : idx) {
      if (i < 0 || i >= static_cast<int>(all.size()))
        throw ConfigError("train: trajectory index out of range: " + std::to_string(i));
      out.push_back(all[static_cast<std::size_t>(i)]);
    }
    return out;
  };
  const TrainingData train_set = TrainingData::load(select(train_idx), k, tc.both_directions);
  const TrainingData val_set = TrainingData::load(select(val_idx), k, tc.both_directions);
  mc.input_size = train_set.input_size;

  BimodalModel model(mc);
  std::cout << "training mode=" << to_string(mode) << " pairs=" << train_set.pairs.size()
            << " val_pairs=" << val_set.pairs.size() << " steps=" << tc.steps << "\n";
  const TrainResult res =
      train(model, train_set, val_set, tc, [](const std::string& m) { std::cout << m << "\n"; });

  ensure_dir(out_dir);
  write_lines(out_dir + "/curve.csv", TrainResult::curve_header(), res.curve_rows);
  model.save_checkpoint(out_dir + "/checkpoint.bin",
                        "mode=" + to_string(mode) + "\nk=" + std::to_string(k) + "\n" +
                            cfg.resolved_text());
  std::cout << "final loss " << res.final_loss << ", val direction accuracy "
            << res.final_val_accuracy << "\n";
  write_run_manifest(out_dir, "train", cfg);
}

void cmd_predict(const KeyValueConfig& cfg, const std::string& out_dir) {
  const std::string ckpt = cfg.get_string("checkpoint", "");
  const std::string data_dir = cfg.get_string("data", "");
  if (ckpt.empty() || data_dir.empty())
    throw ConfigError("predict: requires 'checkpoint' and 'data'");
  const int traj_idx = cfg.get_int("traj", 0);
  cfg.reject_unknown();

  const BimodalModel model = BimodalModel::load_checkpoint(ckpt);
  const auto all = load_dataset(data_dir);
  if (traj_idx < 0 || traj_idx >= static_cast<int>(all.size()))
    throw ConfigError("predict: trajectory index out of range");
  const LoadedTrajectory& traj = all[static_cast<std::size_t>(traj_idx)];
  if (traj.intrinsics.width != model.config().input_size)
    throw ConfigError("predict: checkpoint input size " +
                      std::to_string(model.config().input_size) + " != dataset resolution " +
                      std::to_string(traj.intrinsics.width));

  const PredictedRun run = predict_trajectory(model, traj, model.config().bimodal.k);
  ensure_dir(out_dir);
  write_pose_file(out_dir + "/pred_forward.txt", run.forward);
  write_pose_file(out_dir + "/pred_backward.txt", run.backward);
  std::cout << "predicted " << run.forward.size() << " poses (forward and backward)\n";
  write_run_manifest(out_dir, "predict", cfg);
}

void cmd_eval(const KeyValueConfig& cfg, const std::string& out_dir) {
  const std::string gt_path = cfg.get_string("gt", "");
  const std::string pred_path = cfg.get_string("pred", "");
  if (gt_path.empty() || pred_path.empty()) throw ConfigError("eval: requires 'gt' and 'pred'");
  const std::string pred_bwd_path = cfg.get_string("pred_backward", "");
  EvaluateOptions opt;
  opt.k = cfg.get_int("k", 5);
  opt.supervised_scale = !cfg.get_bool("rescale", false);
  const bool want_hist = cfg.get_bool("histogram", true);
  const std::string label = cfg.get_string("label", "run");
  cfg.reject_unknown();

  const std::vector<Pose> gt = read_pose_file(gt_path);
  const std::vector<Pose> pred = read_pose_file(pred_path);
  const std::vector<Pose> pred_bwd =
      pred_bwd_path.empty() ? std::vector<Pose>{} : read_pose_file(pred_bwd_path);

  const EvaluateResult res = evaluate_run(gt, pred, pred_bwd, opt);
  ensure_dir(out_dir);
  write_lines(out_dir + "/metrics.csv", MetricReport::csv_header(),
              {res.forward.csv_row(label), res.backward.csv_row(label)});
  if (want_hist) {
    std::vector<std::string> rows;
    for (std::size_t i = 0; i < res.hist_gt_fwd.counts.size(); ++i) {
      std::ostringstream ss;
      ss.precision(12);
      ss << res.hist_gt_fwd.bin_edges[i] << ',' << res.hist_gt_fwd.bin_edges[i + 1] << ','
         << res.hist_gt_fwd.counts[i] << ',' << res.hist_pred_fwd.counts[i];
      rows.push_back(ss.str());
    }
    write_lines(out_dir + "/histogram.csv", "bin_left,bin_right,count_gt,count_pred", rows);
    std::cout << "manhattan histogram loss "
              << manhattan_histogram_loss(res.hist_gt_fwd, res.hist_pred_fwd) << "\n";
  }
  std::cout << MetricReport::csv_header() << "\n"
            << res.forward.csv_row(label) << "\n"
            << res.backward.csv_row(label) << "\n";
  write_run_manifest(out_dir, "eval", cfg);
}

void cmd_warp_study(const KeyValueConfig& cfg, const std::string& out_dir) {
  const std::string data_dir = cfg.get_string("data", "");
  if (data_dir.empty()) throw ConfigError("warp-study: missing 'data' (dataset directory)");
  WarpStudyConfig wc;
  wc.n_pairs = cfg.get_int("pairs", 100);
  wc.k = cfg.get_int("k", 5);
  wc.match_means = cfg.get_bool("match_means", false);
  wc.dump_pairs = cfg.get_int("dump_pairs", 3);
  cfg.reject_unknown();

  DatasetManifest manifest;
  const auto trajs = load_dataset(data_dir, &manifest);
  if (!manifest.has_images) throw IoError("warp-study: dataset lacks rendered depth/images");
  ensure_dir(out_dir);

  const WarpStudySummary s = run_warp_study(trajs, wc, out_dir);
  std::vector<std::string> rows;
  rows.reserve(s.rows.size());
  for (const auto& r : s.rows) rows.push_back(r.csv_row());
  write_lines(out_dir + "/warp_study.csv", WarpStudyRow::csv_header(), rows);
  std::cout << "warp study: " << s.n_images << " warped images, wrong pose beats ground truth on "
            << s.fraction_wrong_beats_gt * 100.0 << "%\n";
  write_run_manifest(out_dir, "warp-study", cfg);
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"bimodal endoscopy pose toolkit"};
  app.require_subcommand(1);

  struct SubArgs {
    std::string config_path, out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> frames, k, resolution;
    std::optional<std::string> mode;
    CLI::App* sub = nullptr;
  };
  const std::vector<std::string> names = {"generate", "train", "predict", "eval", "warp-study"};
  std::map<std::string, SubArgs> subs;
  for (const auto& name : names) {
    CLI::App* sub = app.add_subcommand(name);
    SubArgs& sa = subs[name];
    sa.sub = sub;
    sub->add_option("--config", sa.config_path, "key=value config file");
    sub->add_option("--seed", sa.seed, "seed override");
    sub->add_option("--out", sa.out_dir, "output directory");
    sub->add_option("--frames", sa.frames, "frames per trajectory");
    sub->add_option("--k", sa.k, "frame gap");
    sub->add_option("--resolution", sa.resolution, "image resolution");
    sub->add_option("--mode", sa.mode, "training mode");
    sub->allow_extras();  // key=value overrides
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    for (const auto& name : names) {
      SubArgs& sa = subs[name];
      if (!sa.sub->parsed()) continue;
      KeyValueConfig cfg;
      if (!sa.config_path.empty()) cfg = KeyValueConfig::from_file(sa.config_path);
      for (const std::string& extra : sa.sub->remaining()) cfg.apply_override(extra);
      if (sa.seed) cfg.set("seed", std::to_string(*sa.seed));
      if (sa.frames) cfg.set("frames", std::to_string(*sa.frames));
      if (sa.k) cfg.set("k", std::to_string(*sa.k));
      if (sa.resolution) cfg.set("resolution", std::to_string(*sa.resolution));
      if (sa.mode) cfg.set("mode", *sa.mode);
      const std::string out = sa.out_dir.empty() ? "out_" + name : sa.out_dir;
      if (name == "generate") cmd_generate(cfg, out);
      else if (name == "train") cmd_train(cfg, out);
      else if (name == "predict") cmd_predict(cfg, out);
      else if (name == "eval") cmd_eval(cfg, out);
      else cmd_warp_study(cfg, out);
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 4;
  }
  return 2;
}

}  // namespace colonpose

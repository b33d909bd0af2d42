#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "battn/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"boundary-aware attention maps and fashion recognition evaluation"};
  app.require_subcommand(1);

  int exit_code = battn::kExitOk;

  battn::MapOptions map_opts;
  double sigma = 0.0;
  auto* map = app.add_subcommand("map", "rasterize landmark rows into PGM attention maps");
  map->add_option("--landmarks", map_opts.landmarks_path, "landmark file (LANDMARKS v1)")->required();
  map->add_option("--width", map_opts.width, "map width in pixels");
  map->add_option("--height", map_opts.height, "map height in pixels");
  auto* sigma_opt = map->add_option("--sigma", sigma, "blur sigma in pixels; omit for auto (0.05*min(W,H))");
  map->add_option("--floor", map_opts.floor, "background attention floor in [0,1)")->check(CLI::Range(0.0, 1.0));
  map->add_flag("--include-occluded,!--no-include-occluded", map_opts.include_occluded,
                "use occluded landmarks for the hull (default on)");
  map->add_option("--fallback-sigma", map_opts.fallback_sigma, "stamp sigma for degenerate rows");
  map->add_option("--threads", map_opts.threads, "worker threads (0 = BATTN_THREADS env, then hardware)");
  map->add_option("--out-dir", map_opts.out_dir, "output directory for <image_id>.pgm files");
  map->callback([&] {
    if (*sigma_opt) map_opts.sigma = sigma;
    exit_code = battn::cmd_map(map_opts, std::cout, std::cerr);
  });

  battn::HullOptions hull_opts;
  auto* hull = app.add_subcommand("hull", "dump convex boundary vertices per landmark row");
  hull->add_option("--landmarks", hull_opts.landmarks_path, "landmark file (LANDMARKS v1)")->required();
  hull->add_flag("--include-occluded,!--no-include-occluded", hull_opts.include_occluded,
                 "use occluded landmarks (default on)");
  hull->callback([&] { exit_code = battn::cmd_hull(hull_opts, std::cout, std::cerr); });

  battn::EvalOptions eval_opts;
  std::string task;
  auto* eval = app.add_subcommand("eval", "score a prediction file against ground truth");
  eval->add_option("--task", task, "category | attribute | landmark")
      ->required()
      ->check(CLI::IsMember({"category", "attribute", "landmark"}));
  eval->add_option("--pred", eval_opts.pred_path, "prediction file")->required();
  eval->add_option("--gt", eval_opts.gt_path, "ground truth file")->required();
  eval->add_option("--topk", eval_opts.topk, "k values for top-k metrics")->delimiter(',');
  eval->add_flag("--visible-only", eval_opts.visible_only, "landmark task: evaluate only fully visible points");
  eval->add_flag("--macro", eval_opts.macro_recall, "attribute task: macro-average recall over samples");
  eval->add_option("--width", eval_opts.width, "landmark task: width of the coordinate space");
  eval->add_option("--height", eval_opts.height, "landmark task: height of the coordinate space");
  eval->callback([&] {
    if (task == "category") eval_opts.task = battn::EvalTask::category;
    else if (task == "attribute") eval_opts.task = battn::EvalTask::attribute;
    else eval_opts.task = battn::EvalTask::landmark;
    exit_code = battn::cmd_eval(eval_opts, std::cout, std::cerr);
  });

  CLI11_PARSE(app, argc, argv);
  return exit_code;
}

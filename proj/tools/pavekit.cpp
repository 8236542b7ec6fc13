// Manifest-driven pipeline: ingest raw pavement annotations, generate an
// instruction corpus, validate it, and score prediction files against it.

#include <CLI11.hpp>

#include "pavekit/pavekit.hpp"

namespace {

using namespace pavekit;

cli::Manifest load_with_overrides(const std::string& manifest_path,
                                  const std::optional<std::uint64_t>& seed,
                                  const std::optional<bool>& lenient,
                                  const std::optional<std::string>& provider,
                                  const std::optional<std::string>& out_dir) {
  cli::Manifest manifest = cli::load_manifest(manifest_path);
  if (seed) {
    manifest.seed = *seed;
    manifest.generation.mix.seed = *seed;
  }
  if (lenient) manifest.lenient = *lenient;
  if (provider) manifest.generation.provider = *provider;
  if (out_dir) manifest.out_dir = *out_dir;
  return manifest;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pavement annotation unification, instruction-corpus generation, and evaluation"};
  app.require_subcommand(1);

  std::string manifest_path;
  std::optional<std::uint64_t> seed;
  bool lenient_flag = false;
  std::optional<std::string> provider_override;
  std::optional<std::string> out_override;

  std::string corpus_path, predictions_path, verdicts_path, merged_path;
  std::string out_dir = "out";
  std::vector<std::string> metric_names;
  std::string judge_provider = "none";
  std::string model = "default";
  std::size_t per_stratum = 5;
  std::uint64_t review_seed = 0;

  auto* ingest = app.add_subcommand("ingest", "parse raw datasets into the unified store");
  ingest->add_option("--manifest", manifest_path, "manifest file")->required();
  ingest->add_option("--seed", seed, "override the manifest seed");
  ingest->add_flag("--lenient", lenient_flag, "skip unreadable files instead of failing");
  ingest->add_option("--out", out_override, "override the output directory");

  auto* generate = app.add_subcommand("generate", "plan and generate the instruction corpus");
  generate->add_option("--manifest", manifest_path, "manifest file")->required();
  generate->add_option("--seed", seed, "override the manifest seed");
  generate->add_option("--provider", provider_override, "none | mock | remote");
  generate->add_option("--out", out_override, "override the output directory");

  auto* validate = app.add_subcommand("validate", "run quality checks over a corpus");
  validate->add_option("--corpus", corpus_path, "corpus JSON-lines file")->required();
  validate->add_option("--out", out_dir, "directory for validation.json");

  auto* stats = app.add_subcommand("stats", "corpus statistics report");
  stats->add_option("--corpus", corpus_path, "corpus JSON-lines file")->required();
  stats->add_option("--out", out_dir, "output directory");

  auto* review_export = app.add_subcommand("review-export", "export stratified review sheets");
  review_export->add_option("--corpus", corpus_path, "corpus JSON-lines file")->required();
  review_export->add_option("--out", out_dir, "output directory");
  review_export->add_option("--per-stratum", per_stratum, "samples per stratum");
  review_export->add_option("--seed", review_seed, "sampling seed");

  auto* review_merge = app.add_subcommand("review-merge", "merge review verdicts into a corpus");
  review_merge->add_option("--corpus", corpus_path, "corpus JSON-lines file")->required();
  review_merge->add_option("--verdicts", verdicts_path, "verdicts CSV (id,verdict,notes)")->required();
  review_merge->add_option("--out", merged_path, "merged corpus path")->required();

  auto* evaluate = app.add_subcommand("evaluate", "score a predictions file against a corpus");
  evaluate->add_option("--corpus", corpus_path, "corpus JSON-lines file")->required();
  evaluate->add_option("--predictions", predictions_path, "predictions JSON-lines file")->required();
  evaluate->add_option("--metrics", metric_names,
                       "metric families: grounding,region,vqa,pci,caption,judge,parsing,all");
  evaluate->add_option("--provider", judge_provider, "judge provider: none | mock | remote");
  evaluate->add_option("--model", model, "judge model name for remote providers");
  evaluate->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    const std::optional<bool> lenient =
        ingest->count("--lenient") > 0 ? std::optional<bool>(lenient_flag) : std::nullopt;
    if (*ingest)
      return cli::cmd_ingest(
          load_with_overrides(manifest_path, seed, lenient, provider_override, out_override));
    if (*generate)
      return cli::cmd_generate(
          load_with_overrides(manifest_path, seed, std::nullopt, provider_override, out_override));
    if (*validate)
      return cli::cmd_validate(corpus_path, validate->count("--out") > 0
                                                ? std::optional<std::filesystem::path>(out_dir)
                                                : std::nullopt);
    if (*stats) return cli::cmd_stats(corpus_path, out_dir);
    if (*review_export) return cli::cmd_review_export(corpus_path, out_dir, per_stratum, review_seed);
    if (*review_merge) return cli::cmd_review_merge(corpus_path, verdicts_path, merged_path);
    if (*evaluate) {
      evalkit::MetricSelection selection;
      if (!metric_names.empty()) {
        const auto parsed = evalkit::selection_from_list(metric_names);
        if (!parsed) {
          std::cerr << "error: unknown metric family in --metrics\n";
          return 2;
        }
        selection = *parsed;
      } else if (judge_provider != "none") {
        selection = evalkit::MetricSelection::all();
      }
      return cli::cmd_evaluate(corpus_path, predictions_path, selection, judge_provider, model,
                               out_dir);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

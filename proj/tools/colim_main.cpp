// colim command line: load chain descriptions, run verification suites and
// the counterexample demos, emit JSON reports. Exit code 0 iff the overall
// verdict is "pass".

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "colim/commands.hpp"

namespace {

int emit(const colim::json& report, const std::string& out_path) {
  const std::string text = report.dump(2);
  if (out_path.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "error: cannot write '" << out_path << "'\n";
      return 3;
    }
    out << text << "\n";
  }
  return report.at("verdict") == "pass" ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-stage colimits of Hilbert space chains: verification suites and demos"};
  app.require_subcommand(1);

  colim::CmdOptions opts;
  std::string out_path;
  app.add_option("--out", out_path, "write the report here instead of stdout")->capture_default_str();

  auto add_common = [&](CLI::App* sub, bool with_samples) {
    sub->add_option("--depth", opts.depth, "evaluation / iteration depth")->capture_default_str();
    sub->add_option("--tol", opts.tol, "comparison tolerance")->capture_default_str();
    sub->add_option("--window", opts.window, "stopping window length")->capture_default_str();
    sub->add_option("--seed", opts.seed, "root random seed")->capture_default_str();
    if (with_samples)
      sub->add_option("--samples", opts.samples, "number of random samples")->capture_default_str();
  };

  // verify-lemma
  int lemma_samples = 100000;
  int lemma_max_dim = 16;
  CLI::App* lemma = app.add_subcommand("verify-lemma", "random-contraction sweep of the gap inequality");
  lemma->add_option("--samples", lemma_samples, "number of random (G, x, y) samples")->capture_default_str();
  lemma->add_option("--max-dim", lemma_max_dim, "largest stage dimension")->capture_default_str();
  lemma->add_option("--seed", opts.seed, "root random seed")->capture_default_str();
  lemma->add_option("--tol", opts.tol, "comparison tolerance")->capture_default_str();

  // colimit
  std::string colimit_file;
  std::vector<std::string> class_specs;
  CLI::App* colimit = app.add_subcommand("colimit", "limit norms and inner products of classes");
  colimit->add_option("--file", colimit_file, "chain description file")->required();
  colimit->add_option("--class", class_specs, "class as [stage, [[re,im],...]] (repeatable)");
  add_common(colimit, false);

  // tensor-check
  std::string tensor_file;
  int h_dim = 2;
  CLI::App* tensor = app.add_subcommand("tensor-check", "tensor-preservation isometry and naturality");
  tensor->add_option("--file", tensor_file, "chain description file")->required();
  tensor->add_option("--h-dim", h_dim, "dimension of the fixed tensor factor")->capture_default_str();
  add_common(tensor, true);

  // normalize
  std::string normalize_file;
  std::string r_name = "unit_at_zero";
  CLI::App* normalize = app.add_subcommand("normalize", "normalise a bounded chain, emit it with eta");
  normalize->add_option("--file", normalize_file, "chain description file")->required();
  normalize->add_option("--r", r_name, "r variant: unit_at_zero | continuous_clamp")->capture_default_str();
  add_common(normalize, false);

  // counterexample
  std::string which;
  CLI::App* cex = app.add_subcommand("counterexample", "run a counterexample demo");
  cex->add_option("which", which, "scaling | embedding")->required();
  add_common(cex, false);

  // universal-map
  std::string universal_file;
  CLI::App* universal = app.add_subcommand("universal-map", "cocone validation, induced-map checks, dichotomy");
  universal->add_option("--file", universal_file, "chain description file (must hold a cocone)")->required();
  add_common(universal, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (lemma->parsed())
      return emit(colim::cmd_verify_lemma(lemma_samples, lemma_max_dim, opts.seed, opts.tol), out_path);
    if (colimit->parsed()) return emit(colim::cmd_colimit(colimit_file, class_specs, opts), out_path);
    if (tensor->parsed()) return emit(colim::cmd_tensor_check(tensor_file, h_dim, opts), out_path);
    if (normalize->parsed())
      return emit(colim::cmd_normalize(normalize_file, colim::r_variant_from_string(r_name), opts), out_path);
    if (cex->parsed()) return emit(colim::cmd_counterexample(which, opts), out_path);
    if (universal->parsed()) return emit(colim::cmd_universal_map(universal_file, opts), out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pndp/catalog.hpp"
#include "pndp/runner.hpp"

namespace {

struct RunFlags {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<double> tol;
  std::string report = "text";
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--seed", f.seed, "sampling seed");
  cmd->add_option("--samples", f.samples, "sample count")->check(CLI::PositiveNumber);
  cmd->add_option("--tol", f.tol, "residual tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--report", f.report, "report format")->check(CLI::IsMember({"text", "json"}));
}

int emit(const pndp::Manifest& m, const RunFlags& f) {
  const pndp::RunReport rep = pndp::run(m, {f.seed, f.samples, f.tol});
  std::cout << (f.report == "json" ? rep.to_json_text() : rep.to_text());
  return rep.status;
}

pndp::Manifest resolve(const std::string& ref) {
  if (std::filesystem::exists(ref)) return pndp::load_manifest(ref);
  return pndp::catalog::get(ref);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Warped-product Einstein and PNDP verification"};
  app.require_subcommand(1);

  RunFlags verify_flags;
  std::string verify_path;
  auto* verify = app.add_subcommand("verify", "run the checks requested by a manifest file");
  verify->add_option("manifest", verify_path, "manifest path")->required();
  add_run_flags(verify, verify_flags);

  auto* catalog = app.add_subcommand("catalog", "embedded example manifests");
  catalog->require_subcommand(1);
  auto* cat_list = catalog->add_subcommand("list", "list catalog ids");
  RunFlags cat_flags;
  std::string run_id;
  auto* cat_run = catalog->add_subcommand("run", "run a catalog manifest");
  cat_run->add_option("id", run_id, "catalog id")->required();
  add_run_flags(cat_run, cat_flags);
  std::string export_id;
  std::string export_out;
  auto* cat_export = catalog->add_subcommand("export", "print a catalog manifest as JSON");
  cat_export->add_option("id", export_id, "catalog id")->required();
  cat_export->add_option("-o,--output", export_out, "write to this file instead of stdout");

  std::string embed_ref;
  std::size_t embed_points = 50;
  auto* embed = app.add_subcommand("embed", "print the embedding table r, xi(r) of a wormhole profile");
  embed->add_option("manifest", embed_ref, "manifest path or catalog id")->required();
  embed->add_option("--points", embed_points, "number of rows")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify) return emit(pndp::load_manifest(verify_path), verify_flags);
    if (*cat_list) {
      for (const auto& id : pndp::catalog::list()) std::cout << id << "\n";
      return 0;
    }
    if (*cat_run) return emit(pndp::catalog::get(run_id), cat_flags);
    if (*cat_export) {
      const std::string text = pndp::catalog::export_text(export_id);
      if (export_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(export_out);
        if (!out) throw pndp::InvalidArgument("cannot write " + export_out);
        out << text;
      }
      return 0;
    }
    if (*embed) {
      const pndp::Manifest m = resolve(embed_ref);
      if (!m.wormhole) throw pndp::InvalidArgument(m.id + " has no wormhole profile");
      std::cout << pndp::embedding_table(m.wormhole->profile, embed_points);
      return 0;
    }
  } catch (const pndp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

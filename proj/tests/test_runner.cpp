#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "pndp/catalog.hpp"
#include "pndp/runner.hpp"

namespace pndp {
namespace {

struct Expected {
  int status;
  std::map<std::string, CheckStatus> checks;
  std::vector<std::string> findings;
};

constexpr auto P = CheckStatus::Pass;
constexpr auto F = CheckStatus::Fail;

const std::map<std::string, Expected>& pinned() {
  static const std::map<std::string, Expected> table{
      {"euclidean3", {0, {{"einstein", P}}, {}}},
      {"polar_plane", {0, {{"einstein", P}}, {}}},
      {"unit_sphere", {0, {{"einstein", P}}, {}}},
      {"hyperbolic_plane", {0, {{"einstein", P}}, {}}},
      {"example1", {0, {{"blocks", P}, {"einstein", P}, {"pndp", P}}, {}}},
      {"example2",
       {1, {{"blocks", P}, {"einstein", F}, {"pndp", F}}, {"einstein-residual:warp_scalar", "pndp-residual:warp_scalar"}}},
      {"example2_const", {0, {{"blocks", P}, {"einstein", P}, {"pndp", P}}, {}}},
      {"example2_verbatim",
       {1, {{"blocks", P}, {"einstein", F}, {"pndp", F}}, {"structure:fiber", "fiber-sign", "pndp-residual:warp_scalar"}}},
      {"example3", {0, {{"blocks", P}, {"einstein", P}, {"pndp", P}}, {}}},
      {"example4", {0, {{"blocks", P}, {"einstein", P}, {"pndp", P}}, {"constant-warp-forced"}}},
      {"example5", {0, {{"blocks", P}, {"einstein", P}, {"pndp", P}}, {"arithmetic-slip"}}},
      {"example5_verbatim", {0, {{"blocks", P}, {"einstein", P}, {"pndp", P}}, {"arithmetic-slip"}}},
      {"example6", {0, {{"pndp", P}}, {}}},
      {"example7", {0, {{"pndp", P}}, {"constant-h"}}},
      {"example8", {0, {{"pndp", P}}, {}}},
      {"m_pndp", {0, {{"blocks", P}, {"einstein", P}, {"pndp", P}}, {}}},
      {"nonconstant_warp", {0, {{"blocks", P}, {"einstein", P}, {"pndp", P}}, {}}},
      {"sphere_warp", {0, {{"blocks", P}}, {}}},
      {"pointlike_spacetime", {0, {{"spacetime", P}}, {"lapse-square"}}},
      {"graphene_wormhole",
       {0, {{"spacetime", P}, {"wormhole", P}}, {"shape-function-constant", "redshift-alternative", "graphene-lapse"}}},
      {"catenoid_wormhole", {0, {{"wormhole", P}}, {}}},
      {"cone_wormhole", {1, {{"wormhole", F}}, {"throat-undefined"}}},
      {"schwarzschild_wormhole",
       {0, {{"wormhole", P}}, {"shape-function-constant", "flamm-embedding", "redshift-domain"}}},
      {"schwarzschild_wormhole_alt",
       {0, {{"wormhole", P}}, {"shape-function-constant", "flamm-embedding", "redshift-alternative"}}},
  };
  return table;
}

TEST(Catalog, EveryEntryIsPinned) {
  const auto ids = catalog::list();
  EXPECT_EQ(ids.size(), pinned().size());
  for (const auto& id : ids) EXPECT_TRUE(pinned().count(id)) << id;
}

TEST(Catalog, CoversRequiredEntries) {
  const auto ids = catalog::list();
  for (const char* id : {"example1", "example2", "example3", "example4", "example5", "example6", "example7",
                         "example8", "pointlike_spacetime", "schwarzschild_wormhole", "graphene_wormhole", "m_pndp"}) {
    EXPECT_NE(std::find(ids.begin(), ids.end(), id), ids.end()) << id;
  }
}

TEST(Catalog, UnknownIdThrows) {
  EXPECT_THROW((void)catalog::get("example9"), UnknownExample);
  EXPECT_THROW((void)catalog::export_text(""), UnknownExample);
}

TEST(Catalog, EntriesAreVersioned) {
  for (const auto& id : catalog::list()) {
    const Json j = catalog::manifest_json(id);
    EXPECT_EQ(j.at("schema"), kManifestSchema) << id;
    EXPECT_EQ(j.at("version"), catalog::kCatalogVersion) << id;
    EXPECT_EQ(j.at("id"), id);
  }
}

TEST(Catalog, PinnedVerdicts) {
  for (const auto& [id, want] : pinned()) {
    SCOPED_TRACE(id);
    const RunReport rep = run(catalog::get(id));
    EXPECT_EQ(rep.status, want.status);
    EXPECT_EQ(rep.checks.size(), want.checks.size());
    for (const auto& [name, status] : want.checks) {
      const CheckEntry* c = rep.find(name);
      ASSERT_NE(c, nullptr) << name;
      EXPECT_EQ(c->status, status) << name << ": " << c->summary;
    }
    for (const auto& f : want.findings) EXPECT_TRUE(rep.has_finding(f)) << f;
    for (const auto& f : rep.findings) EXPECT_EQ(f.id.rfind("error:", 0), std::string::npos) << f.message;
  }
}

TEST(Run, ExampleOneClassification) {
  const RunReport rep = run(catalog::get("example1"));
  ASSERT_TRUE(rep.descriptor);
  EXPECT_EQ(rep.descriptor->label(), "(4-2)-PNDP");
  EXPECT_EQ(rep.descriptor->type, PndpType::TypeII);
  EXPECT_EQ(rep.descriptor->target.label, "R^2");
  EXPECT_EQ(rep.descriptor->lambda, 0.0);
  EXPECT_EQ(rep.descriptor->quadruple(), "(pi_2, 0, (4, -2), g)");
  ASSERT_TRUE(rep.structure);
  EXPECT_TRUE(rep.structure->special_case);
}

TEST(Run, ExampleTwoResidualIsExactlyTwo) {
  const RunReport rep = run(catalog::get("example2"));
  ASSERT_TRUE(rep.pndp);
  const EquationResult* e = rep.pndp->find("warp_scalar");
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(e->points, rep.samples);
  EXPECT_EQ(e->max_abs, 2.0);
  EXPECT_EQ(e->min_abs, 2.0);
  EXPECT_FALSE(rep.descriptor);
}

TEST(Run, ProjectionTargets) {
  const auto target = [](const char* id) {
    const RunReport rep = run(catalog::get(id));
    EXPECT_TRUE(rep.descriptor) << id;
    return rep.descriptor ? std::make_pair(std::string(type_name(rep.descriptor->type)), rep.descriptor->target.label)
                          : std::make_pair(std::string(), std::string());
  };
  EXPECT_EQ(target("example6"), std::make_pair(std::string("TypeII"), std::string("R^2")));
  EXPECT_EQ(target("example7"), std::make_pair(std::string("TypeI"), std::string("point")));
  EXPECT_EQ(target("example8"), std::make_pair(std::string("NegativeVirtual"), std::string("Sigma^-1(p)")));
  EXPECT_EQ(target("example4"), std::make_pair(std::string("TypeII"), std::string("B4 x B5 x B6")));
  EXPECT_EQ(target("m_pndp"), std::make_pair(std::string("TypeI"), std::string("point")));

  const RunReport five = run(catalog::get("example5"));
  ASSERT_TRUE(five.descriptor);
  EXPECT_EQ(five.descriptor->label(), "(8-4)-PNDP");
  EXPECT_EQ(five.descriptor->virtual_total, 4);
  const RunReport five_verbatim = run(catalog::get("example5_verbatim"));
  ASSERT_TRUE(five_verbatim.descriptor);
  EXPECT_EQ(five_verbatim.descriptor->virtual_total, 2);
}

TEST(Run, NonconstantWarpInfersNegativeLambda) {
  const RunReport rep = run(catalog::get("nonconstant_warp"));
  ASSERT_TRUE(rep.descriptor);
  EXPECT_NEAR(rep.descriptor->lambda, -3.0, 1e-7);
}

TEST(Run, VerbatimFormulaAlwaysLeavesFindings) {
  for (const char* id : {"schwarzschild_wormhole", "schwarzschild_wormhole_alt", "example2_verbatim",
                         "example5_verbatim", "pointlike_spacetime"}) {
    EXPECT_FALSE(run(catalog::get(id)).findings.empty()) << id;
  }
}

TEST(Run, ReportsAreByteIdentical) {
  for (const auto& id : catalog::list()) {
    const Manifest m = catalog::get(id);
    EXPECT_EQ(run(m).to_json_text(), run(m).to_json_text()) << id;
    EXPECT_EQ(run(m).to_text(), run(catalog::get(id)).to_text()) << id;
  }
}

TEST(Run, OverridesAreRecorded) {
  const RunReport rep = run(catalog::get("example1"), {7, 5, 1e-6});
  EXPECT_EQ(rep.seed, 7u);
  EXPECT_EQ(rep.samples, 5u);
  EXPECT_EQ(rep.tolerance, 1e-6);
  ASSERT_TRUE(rep.pndp);
  EXPECT_EQ(rep.pndp->samples, 5u);
  EXPECT_EQ(rep.status, 0);
}

TEST(Run, JsonReportFields) {
  const Json j = run(catalog::get("schwarzschild_wormhole")).to_json();
  for (const char* key : {"manifest_digest", "checks", "findings", "status"}) EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["status"], 0);
  EXPECT_EQ(j["checks"][0]["name"], "wormhole");
  EXPECT_EQ(j["manifest_digest"].get<std::string>().rfind("fnv1a64:", 0), 0u);
}

TEST(Run, ModuleErrorsBecomeEntries) {
  Json j = catalog::manifest_json("example1");
  j["lambda"] = 0;
  j["warped"]["fiber"] = {{"d", 1}, {"rank", 2}, {"coordinates", {"u"}}};
  const RunReport rep = run(manifest_from_json(j));
  const CheckEntry* blocks = rep.find("blocks");
  ASSERT_NE(blocks, nullptr);
  EXPECT_EQ(blocks->status, CheckStatus::Error);
  EXPECT_TRUE(rep.has_finding("error:blocks"));
  EXPECT_NE(rep.status, 0);
}

TEST(Manifest, DigestDependsOnContent) {
  const Manifest a = catalog::get("example1");
  Json j = catalog::manifest_json("example1");
  j["seed"] = 1;
  const Manifest b = manifest_from_json(j);
  EXPECT_NE(manifest_digest(a), manifest_digest(b));
  EXPECT_EQ(manifest_digest(a), manifest_digest(catalog::get("example1")));
}

TEST(Manifest, Fnv1aKnownValues) {
  EXPECT_EQ(fnv1a64(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a64("a"), "af63dc4c8601ec8c");
}

TEST(Manifest, AllExpandsToAvailableChecks) {
  Json j = catalog::manifest_json("graphene_wormhole");
  j["checks"] = {"all"};
  EXPECT_EQ(manifest_from_json(j).checks, (std::vector<std::string>{"spacetime", "wormhole"}));
  j = catalog::manifest_json("example1");
  j["checks"] = {"pndp", "all"};
  EXPECT_EQ(manifest_from_json(j).checks, (std::vector<std::string>{"blocks", "einstein", "pndp"}));
}

TEST(Manifest, SyntaxErrorReportsLine) {
  try {
    (void)parse_manifest("{\n  \"id\": \"x\",,\n}", "bad.json");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("bad.json"), std::string::npos);
  }
}

TEST(Manifest, MissingAndMistypedFieldsName) {
  Json j = catalog::manifest_json("example1");
  j.erase("checks");
  EXPECT_THROW((void)manifest_from_json(j), ParseError);
  j = catalog::manifest_json("example1");
  j["warped"]["fiber"]["rank"] = "four";
  try {
    (void)manifest_from_json(j);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("warped.fiber.rank"), std::string::npos) << e.what();
  }
}

TEST(Manifest, BadExpressionIsParseError) {
  Json j = catalog::manifest_json("unit_sphere");
  j["metrics"]["unit_sphere"]["diagonal"][1] = "(pow (sin theta) 2";
  try {
    (void)manifest_from_json(j);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("metrics.unit_sphere.diagonal[1]"), std::string::npos) << e.what();
  }
}

TEST(Manifest, RankEqualToDimensionIsValidationError) {
  Json j = catalog::manifest_json("example1");
  j["warped"]["fiber"]["rank"] = 2;
  try {
    (void)manifest_from_json(j);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("RankTooSmall"), std::string::npos) << e.what();
  }
}

TEST(Manifest, UnboundSymbolIsNamed) {
  Json j = catalog::manifest_json("unit_sphere");
  j["metrics"]["unit_sphere"]["diagonal"][1] = "(pow (sin omega) 2)";
  try {
    (void)manifest_from_json(j);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("'omega'"), std::string::npos) << e.what();
  }
}

TEST(Manifest, UnresolvedReferencesAndIntervals) {
  Json j = catalog::manifest_json("example1");
  j["warped"]["base_tilde"] = {"B7"};
  EXPECT_THROW((void)manifest_from_json(j), ValidationError);
  j = catalog::manifest_json("euclidean3");
  j["metric"] = "nothing";
  EXPECT_THROW((void)manifest_from_json(j), ValidationError);
  j = catalog::manifest_json("euclidean3");
  j["metrics"]["euclidean3"]["coordinates"][0]["interval"] = {1.0, -1.0};
  EXPECT_THROW((void)manifest_from_json(j), ValidationError);
  j = catalog::manifest_json("euclidean3");
  j["checks"] = {"wormhole"};
  EXPECT_THROW((void)manifest_from_json(j), ValidationError);
  j = catalog::manifest_json("euclidean3");
  j["checks"] = {"everything"};
  EXPECT_THROW((void)manifest_from_json(j), ValidationError);
}

TEST(Manifest, ForeignWarpSymbolIsRejected) {
  Json j = catalog::manifest_json("example2");
  j["warped"]["f_prime"] = "(add 1 (pow x 2))";
  EXPECT_THROW((void)manifest_from_json(j), ValidationError);
}

TEST(Manifest, LoadFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "pndp_runner_test_manifest.json";
  {
    std::ofstream out(path);
    out << catalog::export_text("example1");
  }
  const Manifest m = load_manifest(path.string());
  EXPECT_EQ(m.id, "example1");
  EXPECT_EQ(manifest_digest(m), manifest_digest(catalog::get("example1")));
  std::filesystem::remove(path);
  EXPECT_THROW((void)load_manifest(path.string()), ParseError);
}

TEST(Manifest, SampleManifestsMatchCatalog) {
  const std::filesystem::path dir(PNDP_MANIFEST_DIR);
  std::size_t seen = 0;
  for (const auto& id : catalog::list()) {
    std::ifstream in(dir / (id + ".json"));
    ASSERT_TRUE(in) << id;
    std::ostringstream buf;
    buf << in.rdbuf();
    EXPECT_EQ(buf.str(), catalog::export_text(id)) << id;
    ++seen;
  }
  EXPECT_EQ(seen, catalog::list().size());
}

}  // namespace
}  // namespace pndp

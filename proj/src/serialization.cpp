#include "gsma/serialization.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "gsma/errors.hpp"
#include "gsma/matrix_market.hpp"

namespace gsma {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open manifest " + path);
  json j;
  in >> j;
  return j;
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write manifest " + path);
  out << j.dump(2) << "\n";
}

}  // namespace

std::string save_pencil(const std::string& dir, const std::string& name,
                        const ProjectionPencil& pencil, const std::vector<std::string>& labels) {
  fs::create_directories(dir);
  const std::string e_file = name + "_E.mtx";
  const std::string a_file = name + "_A.mtx";
  mm_write((fs::path(dir) / e_file).string(), pencil.E());
  mm_write((fs::path(dir) / a_file).string(), pencil.A());

  json manifest{{"schema_version", 1},
                {"kind", "pencil"},
                {"dimension", pencil.dimension()},
                {"rank_E", pencil.rank_E()},
                {"files", {{"E", e_file}, {"A", a_file}}},
                {"labels", labels}};
  const std::string path = (fs::path(dir) / (name + ".json")).string();
  write_json(path, manifest);
  return path;
}

ProjectionPencil load_pencil(const std::string& manifest_path) {
  const json manifest = read_json(manifest_path);
  if (manifest.value("kind", "") != "pencil") throw Error("manifest is not a pencil: " + manifest_path);
  const fs::path dir = fs::path(manifest_path).parent_path();
  SparseMatrix E = mm_read_sparse((dir / manifest["files"]["E"].get<std::string>()).string());
  SparseMatrix A = mm_read_sparse((dir / manifest["files"]["A"].get<std::string>()).string());
  ProjectionPencil pencil(std::move(E), std::move(A));
  if (manifest.contains("dimension") && manifest["dimension"].get<Index>() != pencil.dimension())
    throw Error("manifest dimension does not match matrix files");
  return pencil;
}

std::string save_composite(const std::string& dir, const std::string& name,
                           const CompositeModel& model) {
  model.validate();
  fs::create_directories(dir);
  json subs = json::array();
  for (size_t k = 0; k < model.subsystems.size(); ++k) {
    const auto& sub = model.subsystems[k];
    const std::string prefix = name + "_sub" + std::to_string(k);
    json files;
    const std::pair<const char*, const Matrix*> blocks[] = {
        {"E", &sub.E}, {"A", &sub.A}, {"B", &sub.B}, {"C", &sub.C}, {"D", &sub.D}};
    for (const auto& [tag, mat] : blocks) {
      const std::string file = prefix + "_" + tag + ".mtx";
      mm_write((fs::path(dir) / file).string(), *mat);
      files[tag] = file;
    }
    subs.push_back({{"states", sub.states()}, {"io", sub.io()}, {"files", files}});
  }

  json jfiles;
  const std::pair<const char*, const Matrix*> jblocks[] = {{"J11", &model.interconnection.J11},
                                                           {"J12", &model.interconnection.J12},
                                                           {"J21", &model.interconnection.J21},
                                                           {"J22", &model.interconnection.J22}};
  for (const auto& [tag, mat] : jblocks) {
    const std::string file = name + "_" + tag + ".mtx";
    mm_write((fs::path(dir) / file).string(), *mat);
    jfiles[tag] = file;
  }

  json manifest{{"schema_version", 1},
                {"kind", "composite"},
                {"subsystems", subs},
                {"interconnection",
                 {{"algebraic", model.interconnection.algebraic()}, {"files", jfiles}}}};
  const std::string path = (fs::path(dir) / (name + ".json")).string();
  write_json(path, manifest);
  return path;
}

CompositeModel load_composite(const std::string& manifest_path) {
  const json manifest = read_json(manifest_path);
  if (manifest.value("kind", "") != "composite")
    throw Error("manifest is not a composite model: " + manifest_path);
  const fs::path dir = fs::path(manifest_path).parent_path();

  CompositeModel model;
  for (const auto& sub_json : manifest["subsystems"]) {
    Subsystem sub;
    const auto& files = sub_json["files"];
    sub.E = mm_read_dense((dir / files["E"].get<std::string>()).string());
    sub.A = mm_read_dense((dir / files["A"].get<std::string>()).string());
    sub.B = mm_read_dense((dir / files["B"].get<std::string>()).string());
    sub.C = mm_read_dense((dir / files["C"].get<std::string>()).string());
    sub.D = mm_read_dense((dir / files["D"].get<std::string>()).string());
    model.subsystems.push_back(std::move(sub));
  }
  const auto& jfiles = manifest["interconnection"]["files"];
  model.interconnection.J11 = mm_read_dense((dir / jfiles["J11"].get<std::string>()).string());
  model.interconnection.J12 = mm_read_dense((dir / jfiles["J12"].get<std::string>()).string());
  model.interconnection.J21 = mm_read_dense((dir / jfiles["J21"].get<std::string>()).string());
  model.interconnection.J22 = mm_read_dense((dir / jfiles["J22"].get<std::string>()).string());
  model.validate();
  return model;
}

}  // namespace gsma

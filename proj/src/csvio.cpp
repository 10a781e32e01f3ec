#include "gsc/csvio.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gsc/errors.hpp"

namespace gsc {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // '\n' line endings everywhere
  if (!out) throw DataError("cannot open for writing: " + path);
  return out;
}

enum class ZKind { None, Target, Noise };

ZKind z_kind_of(const Dataset& data) {
  if (data.empty() || std::holds_alternative<std::monostate>(data.front().z)) {
    return ZKind::None;
  }
  if (std::holds_alternative<TargetLabel>(data.front().z)) return ZKind::Target;
  if (std::holds_alternative<Vec>(data.front().z)) return ZKind::Noise;
  throw DataError("write_dataset_csv: history side info needs the PPE writer");
}

}  // namespace

void write_dataset_csv(const std::string& path, const Dataset& data) {
  if (data.empty()) throw DataError("write_dataset_csv: empty dataset");
  auto out = open_out(path);
  const Eigen::Index d = data.front().x.size();
  const ZKind zk = z_kind_of(data);
  for (Eigen::Index i = 0; i < d; ++i) out << "x_" << i << ",";
  if (zk == ZKind::Target) out << "z,";
  if (zk == ZKind::Noise) {
    for (Eigen::Index i = 0; i < d; ++i) out << "z_" << i << ",";
  }
  out << "y\n";
  for (const auto& ex : data) {
    if (ex.x.size() != d) throw DataError("write_dataset_csv: ragged feature width");
    for (Eigen::Index i = 0; i < d; ++i) out << format_double(ex.x[i]) << ",";
    if (zk == ZKind::Target) out << target_of(ex.z) << ",";
    if (zk == ZKind::Noise) {
      const Vec& nz = noise_of(ex.z);
      for (Eigen::Index i = 0; i < nz.size(); ++i) out << format_double(nz[i]) << ",";
    }
    out << ex.y << "\n";
  }
}

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset: " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty dataset file: " + path);
  auto header = split_line(line);
  Eigen::Index d = 0, nz = 0;
  bool has_target = false;
  for (const auto& col : header) {
    if (col.rfind("x_", 0) == 0) ++d;
    else if (col == "z") has_target = true;
    else if (col.rfind("z_", 0) == 0) ++nz;
    else if (col != "y") throw DataError("unexpected dataset column: " + col);
  }
  if (d == 0) throw DataError("dataset has no feature columns: " + path);

  Dataset data;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_line(line);
    if (fields.size() != header.size()) throw DataError("ragged dataset row in " + path);
    Example ex;
    std::size_t at = 0;
    ex.x = Vec(d);
    for (Eigen::Index i = 0; i < d; ++i) ex.x[i] = std::stod(fields[at++]);
    if (has_target) {
      ex.z = TargetLabel{std::stoi(fields[at++])};
    } else if (nz > 0) {
      Vec noise(nz);
      for (Eigen::Index i = 0; i < nz; ++i) noise[i] = std::stod(fields[at++]);
      ex.z = std::move(noise);
    }
    ex.y = std::stoi(fields[at++]);
    ex.validate();
    data.push_back(std::move(ex));
  }
  return data;
}

void write_ppe_dataset_csv(const std::string& path, const PpeDataset& data) {
  if (data.empty()) throw DataError("write_ppe_dataset_csv: empty dataset");
  const Eigen::Index d = data.front().x.size();
  const Eigen::Index l = data.front().item.size();
  const Eigen::Index n = data.front().history.size();
  for (const auto& ex : data) {
    if (ex.history.size() != n || ex.x.size() != d || ex.item.size() != l) {
      throw DataError("write_ppe_dataset_csv: needs uniform history size and dims");
    }
  }
  auto out = open_out(path);
  for (Eigen::Index i = 0; i < d; ++i) out << "x_" << i << ",";
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < l; ++i) out << "h" << j << "_a_" << i << ",";
    out << "h" << j << "_y,";
  }
  for (Eigen::Index i = 0; i < l; ++i) out << "a_" << i << ",";
  out << "y\n";
  for (const auto& ex : data) {
    for (Eigen::Index i = 0; i < d; ++i) out << format_double(ex.x[i]) << ",";
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < l; ++i) {
        out << format_double(ex.history.items(j, i)) << ",";
      }
      out << static_cast<int>(ex.history.labels[j]) << ",";
    }
    for (Eigen::Index i = 0; i < l; ++i) out << format_double(ex.item[i]) << ",";
    out << ex.y << "\n";
  }
}

PpeDataset read_ppe_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset: " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty dataset file: " + path);
  auto header = split_line(line);
  Eigen::Index d = 0, l = 0, n = 0;
  for (const auto& col : header) {
    if (col.rfind("x_", 0) == 0) ++d;
    else if (col.rfind("a_", 0) == 0) ++l;
    else if (col.rfind("h", 0) == 0 && col.find("_y") != std::string::npos) ++n;
  }
  if (d == 0 || l == 0) throw DataError("ppe dataset missing feature columns: " + path);

  PpeDataset data;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_line(line);
    if (fields.size() != header.size()) throw DataError("ragged dataset row in " + path);
    PpeExample ex;
    std::size_t at = 0;
    ex.x = Vec(d);
    for (Eigen::Index i = 0; i < d; ++i) ex.x[i] = std::stod(fields[at++]);
    if (n > 0) {
      ex.history.items = Mat(n, l);
      ex.history.labels = Vec(n);
      for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < l; ++i) ex.history.items(j, i) = std::stod(fields[at++]);
        ex.history.labels[j] = std::stod(fields[at++]);
      }
    }
    ex.item = Vec(l);
    for (Eigen::Index i = 0; i < l; ++i) ex.item[i] = std::stod(fields[at++]);
    ex.y = std::stoi(fields[at++]);
    data.push_back(std::move(ex));
  }
  return data;
}

void write_sidecar(const std::string& path, const nlohmann::json& config) {
  nlohmann::json sidecar = config;
  auto now = std::chrono::system_clock::now().time_since_epoch();
  sidecar["timestamp_unix_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
  auto out = open_out(path);
  out << sidecar.dump(2) << "\n";
}

nlohmann::json read_sidecar(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open sidecar: " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

void write_model_json(const std::string& path, const LinearModel& model) {
  nlohmann::json j;
  j["type"] = "linear";
  j["w"] = std::vector<double>(model.w.data(), model.w.data() + model.w.size());
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

void write_model_json(const std::string& path, const BilinearModel& model) {
  nlohmann::json j;
  j["type"] = "bilinear";
  j["rows"] = model.W.rows();
  j["cols"] = model.W.cols();
  std::vector<double> flat(model.W.data(), model.W.data() + model.W.size());
  j["W"] = flat;
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

bool read_model_json(const std::string& path, LinearModel* linear, BilinearModel* bilinear) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model: " + path);
  nlohmann::json j;
  in >> j;
  std::string type = j.at("type");
  if (type == "linear") {
    std::vector<double> w = j.at("w");
    linear->w = Eigen::Map<Vec>(w.data(), w.size());
    return true;
  }
  if (type == "bilinear") {
    std::vector<double> flat = j.at("W");
    Eigen::Index rows = j.at("rows"), cols = j.at("cols");
    if (static_cast<Eigen::Index>(flat.size()) != rows * cols) {
      throw DataError("model file has inconsistent matrix shape: " + path);
    }
    bilinear->W = Eigen::Map<Mat>(flat.data(), rows, cols);
    return false;
  }
  throw DataError("unknown model type in " + path);
}

}  // namespace gsc

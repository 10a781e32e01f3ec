#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "gsc/types.hpp"

namespace gsc {

// Fixed-format float used for all emitted files; %.17g round-trips doubles.
std::string format_double(double v);

// Datasets are stored as one CSV per split: feature columns x_0..x_{d-1},
// side-information columns as dictated by the variant (a single `z` column
// for target labels, z_0.. for noise vectors, h{j}_* blocks plus item columns
// for histories), then the label column y.
void write_dataset_csv(const std::string& path, const Dataset& data);
Dataset read_dataset_csv(const std::string& path);

void write_ppe_dataset_csv(const std::string& path, const PpeDataset& data);
PpeDataset read_ppe_dataset_csv(const std::string& path);

// Sidecar with the full configuration needed to regenerate a result file.
void write_sidecar(const std::string& path, const nlohmann::json& config);
nlohmann::json read_sidecar(const std::string& path);

void write_model_json(const std::string& path, const LinearModel& model);
void write_model_json(const std::string& path, const BilinearModel& model);
bool read_model_json(const std::string& path, LinearModel* linear, BilinearModel* bilinear);

}  // namespace gsc

#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "neuronland/instances.hpp"
#include "neuronland/optimizer.hpp"

namespace neuronland {

// All emitted files are UTF-8 with LF line endings; floats are printed with
// 17 significant digits so a write/read round trip is bit-exact.

std::string format_double(double v);
std::string csv_line(const Vec& row);

void write_dataset_csv(const LabeledDataset& ds, const std::filesystem::path& path);
void write_dataset_meta(const LabeledDataset& ds, const std::filesystem::path& path);
LabeledDataset read_dataset(const std::filesystem::path& csv_path,
                            const std::filesystem::path& meta_path);

// Summary JSON (config echo, final state; wall time intentionally omitted so
// outputs are byte-identical across runs) and per-iteration trace CSV with
// header t,loss,grad_l2,grad_dual,w_l2.
void write_run_summary(const RunReport& rep, const nlohmann::json& resolved_config,
                       const std::filesystem::path& path);
void write_run_trace(const RunReport& rep, const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& contents);

nlohmann::json marginal_to_json(const MarginalSpec& spec);
MarginalSpec marginal_from_json(const nlohmann::json& j);

}  // namespace neuronland

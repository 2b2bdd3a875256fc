#include "neuronland/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace neuronland {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_line(const Vec& row) {
  std::string line;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) line += ',';
    line += format_double(row[i]);
  }
  return line;
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << contents;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_dataset_csv(const LabeledDataset& ds, const std::filesystem::path& path) {
  std::string buf;
  buf.reserve(ds.n * (ds.d + 1) * 12);
  for (std::size_t j = 0; j < ds.d; ++j) buf += "x" + std::to_string(j + 1) + ",";
  buf += "y\n";
  for (std::size_t i = 0; i < ds.n; ++i) {
    for (std::size_t j = 0; j < ds.d; ++j) {
      buf += format_double(ds.X[i * ds.d + j]);
      buf += ',';
    }
    buf += format_double(ds.y[i]);
    buf += '\n';
  }
  write_text_file(path, buf);
}

json marginal_to_json(const MarginalSpec& spec) {
  return json{{"family", family_name(spec.family)},
              {"dim", spec.dim},
              {"L", spec.L},
              {"R", spec.R}};
}

MarginalSpec marginal_from_json(const json& j) {
  MarginalSpec spec;
  spec.family = family_from_name(j.at("family").get<std::string>());
  spec.dim = j.at("dim").get<int>();
  spec.L = j.value("L", 0.0);
  spec.R = j.value("R", 0.0);
  if (spec.L == 0.0 || spec.R == 0.0) {
    const MarginalSpec def = default_marginal(spec.family, spec.dim);
    if (spec.L == 0.0) spec.L = def.L;
    if (spec.R == 0.0) spec.R = def.R;
  }
  return spec;
}

void write_dataset_meta(const LabeledDataset& ds, const std::filesystem::path& path) {
  json j;
  j["n"] = ds.n;
  j["d"] = ds.d;
  j["marginal"] = marginal_to_json(ds.meta.marginal);
  j["seed"] = ds.meta.seed;
  j["generator"] = ds.meta.generator;
  j["activation"] = ds.meta.activation;
  if (ds.meta.w_star) j["w_star"] = *ds.meta.w_star;
  if (ds.meta.nominal_eps) j["nominal_eps"] = *ds.meta.nominal_eps;
  for (const auto& [name, vec] : ds.meta.aux) j["aux"][name] = vec;
  write_text_file(path, j.dump(2) + "\n");
}

LabeledDataset read_dataset(const std::filesystem::path& csv_path,
                            const std::filesystem::path& meta_path) {
  std::ifstream meta_in(meta_path);
  if (!meta_in) throw std::runtime_error("cannot open: " + meta_path.string());
  json j = json::parse(meta_in);

  LabeledDataset ds;
  ds.n = j.at("n").get<std::size_t>();
  ds.d = j.at("d").get<std::size_t>();
  ds.meta.marginal = marginal_from_json(j.at("marginal"));
  ds.meta.seed = j.value("seed", 0ULL);
  ds.meta.generator = j.value("generator", "");
  ds.meta.activation = j.value("activation", "");
  if (j.contains("w_star")) ds.meta.w_star = j["w_star"].get<Vec>();
  if (j.contains("nominal_eps")) ds.meta.nominal_eps = j["nominal_eps"].get<double>();
  if (j.contains("aux"))
    for (const auto& [name, vec] : j["aux"].items()) ds.meta.aux[name] = vec.get<Vec>();

  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + csv_path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty dataset csv");
  ds.X.reserve(ds.n * ds.d);
  ds.y.reserve(ds.n);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<double> vals;
    while (std::getline(ss, field, ',')) vals.push_back(std::strtod(field.c_str(), nullptr));
    if (vals.size() != ds.d + 1) throw std::runtime_error("dataset csv row width mismatch");
    for (std::size_t jx = 0; jx < ds.d; ++jx) ds.X.push_back(vals[jx]);
    ds.y.push_back(vals[ds.d]);
  }
  if (ds.y.size() != ds.n) throw std::runtime_error("dataset csv row count mismatch");
  return ds;
}

void write_run_summary(const RunReport& rep, const json& resolved_config,
                       const std::filesystem::path& path) {
  json j;
  j["config"] = resolved_config;
  j["loss_convention"] = "F(w) = (1/2) mean (act(w.x) - tr(y))^2 + (rho/2) ||w||^2";
  j["final_w"] = rep.final_w;
  j["final_loss"] = rep.final_loss;
  j["diverged"] = rep.diverged;
  j["steps_run"] = rep.steps_run;
  j["total_samples"] = rep.total_samples;
  write_text_file(path, j.dump(2) + "\n");
}

void write_run_trace(const RunReport& rep, const std::filesystem::path& path) {
  std::string buf = "t,loss,grad_l2,grad_dual,w_l2\n";
  for (std::size_t k = 0; k < rep.iters.size(); ++k) {
    buf += std::to_string(rep.iters[k]);
    buf += ',';
    buf += format_double(rep.losses[k]);
    buf += ',';
    buf += format_double(rep.grad_l2[k]);
    buf += ',';
    buf += format_double(rep.grad_dual[k]);
    buf += ',';
    buf += format_double(rep.w_l2[k]);
    buf += '\n';
  }
  write_text_file(path, buf);
}

}  // namespace neuronland

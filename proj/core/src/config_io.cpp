#include <fstream>
#include <set>
#include <sstream>

#include "chest/scenario.hpp"
#include <nlohmann/json.hpp>

namespace chest {
namespace {

using nlohmann::json;

class Section {
 public:
  Section(const json& root, std::string name) : name_(std::move(name)) {
    if (!root.contains(name_)) return;
    const json& node = root.at(name_);
    if (!node.is_object()) throw ConfigError(name_, "must be a JSON object");
    node_ = &node;
  }

  template <typename T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    if (node_ == nullptr || !node_->contains(key)) return;
    try {
      out = node_->at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(name_ + "." + key, std::string("wrong type: ") + e.what());
    }
  }

  void read(const char* key, Interval& out) {
    std::vector<double> v{out.lo, out.hi};
    read(key, v);
    if (v.size() != 2) throw ConfigError(name_ + "." + key, "expects [lo, hi]");
    out = {v[0], v[1]};
  }

  void read(const char* key, std::optional<int>& out) {
    seen_.insert(key);
    if (node_ == nullptr || !node_->contains(key)) return;
    const json& v = node_->at(key);
    if (v.is_string() && v.get<std::string>() == "auto") {
      out.reset();
    } else if (v.is_number_integer()) {
      out = v.get<int>();
    } else {
      throw ConfigError(name_ + "." + key, "expects an integer or \"auto\"");
    }
  }

  void reject_unknown() const {
    if (node_ == nullptr) return;
    for (const auto& [key, value] : node_->items()) {
      if (!seen_.contains(key)) throw ConfigError(name_ + "." + key, "unknown key");
    }
  }

 private:
  std::string name_;
  const json* node_ = nullptr;
  std::set<std::string> seen_;
};

}  // namespace

ConfigBundle parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config", "top level must be a JSON object");
  for (const auto& [key, value] : root.items()) {
    if (key != "system" && key != "scenario" && key != "estimator" && key != "experiment") {
      throw ConfigError(key, "unknown section");
    }
  }

  SystemConfig sys;
  Section s(root, "system");
  s.read("n_subcarriers", sys.n_subcarriers);
  s.read("cp_length", sys.cp_length);
  s.read("n_rx", sys.n_rx);
  s.read("n_pilots", sys.n_pilots);
  s.read("subcarrier_spacing", sys.subcarrier_spacing);
  s.read("carrier_freq", sys.carrier_freq);
  s.read("symbol_power", sys.symbol_power);
  s.read("snr_grid", sys.snr_grid);
  s.read("n_trials", sys.n_trials);
  s.read("seed", sys.seed);
  s.reject_unknown();

  ScenarioConfig scen;
  Section c(root, "scenario");
  c.read("n_paths", scen.n_paths);
  c.read("n_dt_paths", scen.n_dt_paths);
  c.read("delay_spread", scen.delay_spread);
  c.read("pdp_decay", scen.pdp_decay);
  c.read("azimuth_range", scen.azimuth_range);
  c.read("elevation_range", scen.elevation_range);
  c.read("array_spacing", scen.array_spacing);
  c.read("pulse_rolloff", scen.pulse_rolloff);
  c.reject_unknown();

  EstimatorConfig est;
  Section e(root, "estimator");
  e.read("tau_max", est.tau_max);
  e.read("n_batch", est.n_batch);
  e.read("bml_rank_spatial", est.bml_rank_spatial);
  e.read("bml_rank_temporal", est.bml_rank_temporal);
  e.read("svd_rank_tolerance", est.svd_rank_tolerance);
  e.reject_unknown();

  ExperimentConfig exp;
  Section x(root, "experiment");
  x.read("ecdf_snr_db", exp.ecdf_snr_db);
  x.read("pilot_counts", exp.pilot_counts);
  x.read("pilot_grid", exp.pilot_grid);
  x.read("pilot_snr_db", exp.pilot_snr_db);
  x.read("desk_n_rx", exp.desk_n_rx);
  x.read("desk_pilot_subcarriers", exp.desk_pilot_subcarriers);
  x.read("full_pilot_subcarriers", exp.full_pilot_subcarriers);
  x.read("batch_sizes", exp.batch_sizes);
  x.read("threads", exp.threads);
  x.reject_unknown();

  return validate_config(sys, scen, est, exp);
}

ConfigBundle load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const ConfigBundle& b) {
  auto rank = [](const std::optional<int>& r) -> json {
    return r ? json(*r) : json("auto");
  };
  json root;
  root["system"] = {
      {"n_subcarriers", b.system.n_subcarriers},
      {"cp_length", b.cp_length},
      {"n_rx", b.system.n_rx},
      {"n_pilots", b.system.n_pilots},
      {"subcarrier_spacing", b.system.subcarrier_spacing},
      {"carrier_freq", b.system.carrier_freq},
      {"symbol_power", b.system.symbol_power},
      {"snr_grid", b.system.snr_grid},
      {"n_trials", b.system.n_trials},
      {"seed", b.system.seed},
  };
  root["scenario"] = {
      {"n_paths", b.scenario.n_paths},
      {"n_dt_paths", b.scenario.n_dt_paths},
      {"delay_spread", b.scenario.delay_spread},
      {"pdp_decay", b.scenario.pdp_decay},
      {"azimuth_range", {b.scenario.azimuth_range.lo, b.scenario.azimuth_range.hi}},
      {"elevation_range", {b.scenario.elevation_range.lo, b.scenario.elevation_range.hi}},
      {"array_spacing", b.scenario.array_spacing},
      {"pulse_rolloff", b.scenario.pulse_rolloff},
  };
  root["estimator"] = {
      {"tau_max", b.estimator.tau_max},
      {"n_batch", b.estimator.n_batch},
      {"bml_rank_spatial", rank(b.estimator.bml_rank_spatial)},
      {"bml_rank_temporal", rank(b.estimator.bml_rank_temporal)},
      {"svd_rank_tolerance", b.estimator.svd_rank_tolerance},
  };
  root["experiment"] = {
      {"ecdf_snr_db", b.experiment.ecdf_snr_db},
      {"pilot_counts", b.experiment.pilot_counts},
      {"pilot_grid", b.experiment.pilot_grid},
      {"pilot_snr_db", b.experiment.pilot_snr_db},
      {"desk_n_rx", b.experiment.desk_n_rx},
      {"desk_pilot_subcarriers", b.experiment.desk_pilot_subcarriers},
      {"full_pilot_subcarriers", b.experiment.full_pilot_subcarriers},
      {"batch_sizes", b.experiment.batch_sizes},
      {"threads", b.experiment.threads},
  };
  return root.dump(2);
}

}  // namespace chest

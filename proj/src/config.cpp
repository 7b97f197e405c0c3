#include "edgeveritas/config.hpp"

#include <string>

namespace edgeveritas {

std::map<DegradationKind, DegradationSpec> RunConfig::default_degradations(std::uint64_t seed) {
  std::map<DegradationKind, DegradationSpec> specs;
  for (const DegradationKind kind : kAllDegradations) {
    specs.emplace(kind, DegradationSpec::defaults(kind, seed));
  }
  return specs;
}

DegradationSpec RunConfig::degradation(DegradationKind kind) const {
  DegradationSpec spec = degradations.at(kind);
  spec.seed = seed;
  return spec;
}

nlohmann::json to_json(const RunConfig& config) {
  const CannyParams& canny = config.scoring.canny;
  nlohmann::json degrade = nlohmann::json::object();
  for (const auto& [kind, spec] : config.degradations) {
    nlohmann::json params = to_json(spec);
    params.erase("kind");
    params.erase("seed");
    degrade[std::string(to_string(kind))] = std::move(params);
  }
  return {
      {"canny", {{"t_low", canny.t_low}, {"t_high", canny.t_high}}},
      {"blur", {{"kernel", canny.blur_kernel}, {"sigma", canny.blur_sigma}}},
      {"canny_internal_blur", canny.internal_blur},
      {"epsilon", config.scoring.epsilon},
      {"edge_input", config.scoring.input == EdgeInput::resized ? "resized" : "native"},
      {"strategy", to_string(config.strategy)},
      {"orientation", to_string(config.orientation)},
      {"bins", config.bins},
      {"seed", config.seed},
      {"degrade", std::move(degrade)},
  };
}

namespace {

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorCode::UsageError, "config: " + what);
}

template <typename T>
T read(const nlohmann::json& json, const std::string& key) {
  try {
    return json.get<T>();
  } catch (const nlohmann::json::exception&) {
    config_error("key '" + key + "' has the wrong type");
  }
}

void require_object(const nlohmann::json& json, const std::string& key) {
  if (!json.is_object()) config_error("'" + key + "' must be an object");
}

void merge_degradation(DegradationSpec& spec, const nlohmann::json& json, const std::string& key) {
  require_object(json, key);
  for (const auto& [name, value] : json.items()) {
    const std::string path = key + "." + name;
    if (name == "sigma") spec.sigma = read<double>(value, path);
    else if (name == "density") spec.density = read<double>(value, path);
    else if (name == "kernel") spec.kernel = read<int>(value, path);
    else if (name == "length") spec.length = read<int>(value, path);
    else if (name == "area_fraction") spec.area_fraction = read<double>(value, path);
    else if (name == "spacing") spec.spacing = read<int>(value, path);
    else config_error("unknown key '" + path + "'");
  }
}

}  // namespace

void merge_config(RunConfig& config, const nlohmann::json& json) {
  require_object(json, "config");
  CannyParams& canny = config.scoring.canny;
  for (const auto& [key, value] : json.items()) {
    if (key == "canny") {
      require_object(value, key);
      for (const auto& [name, v] : value.items()) {
        if (name == "t_low") canny.t_low = read<double>(v, "canny.t_low");
        else if (name == "t_high") canny.t_high = read<double>(v, "canny.t_high");
        else config_error("unknown key 'canny." + name + "'");
      }
    } else if (key == "blur") {
      require_object(value, key);
      for (const auto& [name, v] : value.items()) {
        if (name == "kernel") canny.blur_kernel = read<int>(v, "blur.kernel");
        else if (name == "sigma") canny.blur_sigma = read<double>(v, "blur.sigma");
        else config_error("unknown key 'blur." + name + "'");
      }
    } else if (key == "canny_internal_blur") {
      canny.internal_blur = read<bool>(value, key);
    } else if (key == "epsilon") {
      config.scoring.epsilon = read<double>(value, key);
    } else if (key == "edge_input") {
      const auto text = read<std::string>(value, key);
      if (text == "native") config.scoring.input = EdgeInput::native;
      else if (text == "resized") config.scoring.input = EdgeInput::resized;
      else config_error("edge_input must be native or resized");
    } else if (key == "strategy") {
      const auto s = parse_strategy(read<std::string>(value, key));
      if (!s) config_error("strategy must be median, mean or mode");
      config.strategy = *s;
    } else if (key == "orientation") {
      const auto m = parse_orientation_mode(read<std::string>(value, key));
      if (!m) config_error("orientation must be recorded or paper_fixed");
      config.orientation = *m;
    } else if (key == "bins") {
      config.bins = read<std::size_t>(value, key);
    } else if (key == "seed") {
      config.seed = read<std::uint64_t>(value, key);
    } else if (key == "degrade") {
      require_object(value, key);
      for (const auto& [name, params] : value.items()) {
        const auto kind = parse_degradation(name);
        if (!kind) config_error("unknown degradation '" + name + "'");
        merge_degradation(config.degradations.at(*kind), params, "degrade." + name);
      }
    } else {
      config_error("unknown key '" + key + "'");
    }
  }
}

}  // namespace edgeveritas

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "szoom/pipeline.h"

namespace szoom {

int PipelineConfig::omega_for(const std::string& kind) const {
  const auto it = omega_per_kind.find(kind);
  return it == omega_per_kind.end() ? omega : it->second;
}

double PipelineConfig::effective_fps(std::optional<double> container_fps) const {
  if (fps > 0.0) return fps;
  if (container_fps && *container_fps > 0.0) return *container_fps;
  return 30.0;
}

int PipelineConfig::cycle_frames(std::optional<double> container_fps) const {
  return round_half_up(delta_seconds * effective_fps(container_fps));
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void config_error(std::size_t line, const std::string& msg) {
  throw Error("config line " + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& v, std::size_t line) {
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    config_error(line, "'" + v + "' is not a number");
  }
  if (used != v.size() || !std::isfinite(d)) {
    config_error(line, "'" + v + "' is not a number");
  }
  return d;
}

long long to_int(const std::string& v, std::size_t line) {
  std::size_t used = 0;
  long long i = 0;
  try {
    i = std::stoll(v, &used);
  } catch (const std::exception&) {
    config_error(line, "'" + v + "' is not an integer");
  }
  if (used != v.size()) config_error(line, "'" + v + "' is not an integer");
  return i;
}

}  // namespace

PipelineConfig parse_config(std::istream& in) {
  PipelineConfig cfg;
  std::map<std::string, double> weights;

  using Setter = std::function<void(const std::string&, std::size_t)>;
  auto real = [](double& dst) -> Setter {
    return [&dst](const std::string& v, std::size_t line) { dst = to_double(v, line); };
  };
  auto integer = [](int& dst) -> Setter {
    return [&dst](const std::string& v, std::size_t line) {
      dst = static_cast<int>(to_int(v, line));
    };
  };
  const std::map<std::string, Setter> setters = {
      {"omega", integer(cfg.omega)},
      {"delta_seconds", real(cfg.delta_seconds)},
      {"fps", real(cfg.fps)},
      {"alpha", real(cfg.alpha)},
      {"threshold", real(cfg.threshold)},
      {"merge_dist", integer(cfg.merge_dist)},
      {"min_area", real(cfg.min_area)},
      {"min_area_fraction", real(cfg.min_area_fraction)},
      {"motion_scale", real(cfg.motion_scale)},
      {"human_scale", real(cfg.human_scale)},
      {"out_w", integer(cfg.out_w)},
      {"out_h", integer(cfg.out_h)},
      {"seed",
       [&cfg](const std::string& v, std::size_t line) {
         const long long s = to_int(v, line);
         if (s < 0) config_error(line, "seed must be >= 0");
         cfg.seed = static_cast<std::uint64_t>(s);
       }},
      {"a_pct", real(cfg.a_pct)},
      {"b_pct", real(cfg.b_pct)},
      {"median_window", integer(cfg.median_window)},
      {"confidence_threshold", real(cfg.confidence_threshold)},
      {"mog.components", integer(cfg.mog.components)},
      {"mog.learning_rate", real(cfg.mog.learning_rate)},
      {"mog.variance_threshold", real(cfg.mog.variance_threshold)},
      {"mog.initial_variance", real(cfg.mog.initial_variance)},
      {"mog.background_ratio", real(cfg.mog.background_ratio)},
      {"tracker.bins", integer(cfg.tracker.bins_per_channel)},
      {"tracker.max_iterations", integer(cfg.tracker.max_iterations)},
      {"tracker.epsilon", real(cfg.tracker.epsilon)},
  };

  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (const auto hash = text.find('#'); hash != std::string::npos) {
      text.erase(hash);
    }
    text = trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) config_error(line, "expected 'key = value'");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty() || value.empty()) config_error(line, "expected 'key = value'");

    if (key.rfind("weight.", 0) == 0 && key.size() > 7) {
      weights[key.substr(7)] = to_double(value, line);
    } else if (key.rfind("omega.", 0) == 0 && key.size() > 6) {
      cfg.omega_per_kind[key.substr(6)] = static_cast<int>(to_int(value, line));
    } else if (const auto it = setters.find(key); it != setters.end()) {
      it->second(value, line);
    } else {
      config_error(line, "unknown key '" + key + "'");
    }
  }
  if (!weights.empty()) cfg.weights = FusionWeights(std::move(weights));
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config '" + path.string() + "'");
  return parse_config(in);
}

std::string format_config(const PipelineConfig& c) {
  std::ostringstream out;
  out.precision(17);
  out << "omega = " << c.omega << "\n";
  for (const auto& [kind, w] : c.omega_per_kind) {
    out << "omega." << kind << " = " << w << "\n";
  }
  out << "delta_seconds = " << c.delta_seconds << "\n"
      << "fps = " << c.fps << "\n"
      << "alpha = " << c.alpha << "\n";
  for (const auto& [kind, w] : c.weights.weights()) {
    out << "weight." << kind << " = " << w << "\n";
  }
  out << "threshold = " << c.threshold << "\n"
      << "merge_dist = " << c.merge_dist << "\n"
      << "min_area = " << c.min_area << "\n"
      << "min_area_fraction = " << c.min_area_fraction << "\n"
      << "motion_scale = " << c.motion_scale << "\n"
      << "human_scale = " << c.human_scale << "\n"
      << "out_w = " << c.out_w << "\n"
      << "out_h = " << c.out_h << "\n"
      << "seed = " << c.seed << "\n"
      << "a_pct = " << c.a_pct << "\n"
      << "b_pct = " << c.b_pct << "\n"
      << "median_window = " << c.median_window << "\n"
      << "confidence_threshold = " << c.confidence_threshold << "\n"
      << "mog.components = " << c.mog.components << "\n"
      << "mog.learning_rate = " << c.mog.learning_rate << "\n"
      << "mog.variance_threshold = " << c.mog.variance_threshold << "\n"
      << "mog.initial_variance = " << c.mog.initial_variance << "\n"
      << "mog.background_ratio = " << c.mog.background_ratio << "\n"
      << "tracker.bins = " << c.tracker.bins_per_channel << "\n"
      << "tracker.max_iterations = " << c.tracker.max_iterations << "\n"
      << "tracker.epsilon = " << c.tracker.epsilon << "\n";
  return out.str();
}

}  // namespace szoom

#include <fstream>
#include <map>

#include "json.hpp"
#include "szoom/image_io.h"
#include "szoom/pipeline.h"

namespace szoom {

namespace {

using ojson = nlohmann::ordered_json;
using json = nlohmann::json;

[[noreturn]] void line_error(const std::string& what, std::size_t line,
                             const std::string& msg) {
  throw Error(what + " line " + std::to_string(line) + ": " + msg);
}

template <typename T>
T field(const json& j, const char* key, const std::string& what,
        std::size_t line) {
  const auto it = j.find(key);
  if (it == j.end()) line_error(what, line, std::string("missing field '") + key + "'");
  try {
    return it->template get<T>();
  } catch (const json::exception&) {
    line_error(what, line, std::string("field '") + key + "' has the wrong type");
  }
}

Rect rect_from(const json& j, const std::string& what, std::size_t line) {
  if (!j.is_object()) line_error(what, line, "rect must be an object");
  return {field<int>(j, "x", what, line), field<int>(j, "y", what, line),
          field<int>(j, "w", what, line), field<int>(j, "h", what, line)};
}

template <typename Fn>
void for_each_json_line(std::istream& in, const std::string& what, Fn fn) {
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error&) {
      line_error(what, line, "invalid JSON");
    }
    if (!j.is_object()) line_error(what, line, "expected a JSON object");
    fn(j, line);
  }
}

}  // namespace

std::string format_trajectory_entry(const TrajectoryEntry& e) {
  ojson j;
  j["frame"] = e.frame;
  j["cycle"] = e.cycle;
  j["phase"] = phase_name(e.phase);
  j["cx"] = e.view.cx;
  j["cy"] = e.view.cy;
  j["vw"] = e.view.vw;
  j["vh"] = e.view.vh;
  if (e.target) {
    j["target"] = {{"x", e.target->x}, {"y", e.target->y},
                   {"w", e.target->w}, {"h", e.target->h}};
  } else {
    j["target"] = nullptr;
  }
  return j.dump();
}

std::vector<TrajectoryEntry> read_trajectory(std::istream& in) {
  const std::string what = "trajectory";
  std::vector<TrajectoryEntry> out;
  for_each_json_line(in, what, [&](const json& j, std::size_t line) {
    TrajectoryEntry e;
    e.frame = field<std::int64_t>(j, "frame", what, line);
    e.cycle = field<int>(j, "cycle", what, line);
    try {
      e.phase = phase_from_name(field<std::string>(j, "phase", what, line));
    } catch (const Error& err) {
      line_error(what, line, err.what());
    }
    e.view.cx = field<double>(j, "cx", what, line);
    e.view.cy = field<double>(j, "cy", what, line);
    e.view.vw = field<double>(j, "vw", what, line);
    e.view.vh = field<double>(j, "vh", what, line);
    if (const auto t = j.find("target"); t != j.end() && !t->is_null()) {
      e.target = rect_from(*t, what, line);
    }
    if (!out.empty() && e.frame != out.back().frame + 1) {
      line_error(what, line, "frame " + std::to_string(e.frame) +
                                 " does not follow frame " +
                                 std::to_string(out.back().frame));
    }
    out.push_back(e);
  });
  return out;
}

std::vector<TrajectoryEntry> read_trajectory_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open trajectory '" + path.string() + "'");
  return read_trajectory(in);
}

std::vector<CycleTruth> read_cycle_truth(std::istream& in) {
  const std::string what = "truth";
  std::vector<CycleTruth> out;
  for_each_json_line(in, what, [&](const json& j, std::size_t line) {
    CycleTruth t;
    t.cycle = field<int>(j, "cycle", what, line);
    t.box = rect_from(j, what, line);
    if (t.box.w < 1 || t.box.h < 1) line_error(what, line, "empty box");
    out.push_back(t);
  });
  return out;
}

std::vector<CycleTruth> read_cycle_truth_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open truth file '" + path.string() + "'");
  return read_cycle_truth(in);
}

double zoom_accuracy(const std::vector<TrajectoryEntry>& trajectory,
                     const std::vector<CycleTruth>& truth) {
  // Last hold-phase entry of each cycle.
  std::map<int, const TrajectoryEntry*> held;
  for (const auto& e : trajectory) {
    if (e.phase == Phase::kHold) held[e.cycle] = &e;
  }
  if (held.empty()) return 1.0;

  std::map<int, Rect> boxes;
  for (const auto& t : truth) boxes[t.cycle] = t.box;

  constexpr double kSlack = 1e-9;
  int correct = 0;
  for (const auto& [cycle, e] : held) {
    const auto it = boxes.find(cycle);
    if (it == boxes.end()) {
      throw Error("zoom_accuracy: no truth box for cycle " + std::to_string(cycle));
    }
    const Rect& b = it->second;
    const double x0 = e->view.cx - e->view.vw / 2.0;
    const double y0 = e->view.cy - e->view.vh / 2.0;
    const double x1 = e->view.cx + e->view.vw / 2.0;
    const double y1 = e->view.cy + e->view.vh / 2.0;
    if (b.x >= x0 - kSlack && b.y >= y0 - kSlack && b.right() <= x1 + kSlack &&
        b.bottom() <= y1 + kSlack) {
      ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(held.size());
}

PrfReport evaluate_prf_dirs(const std::filesystem::path& pred_dir,
                            const std::filesystem::path& truth_dir) {
  const auto preds = list_images(pred_dir);
  const auto truths = list_images(truth_dir);
  std::map<std::string, std::filesystem::path> truth_by_stem;
  for (const auto& t : truths) truth_by_stem[t.stem().string()] = t;

  PrfReport report;
  for (const auto& p : preds) {
    const auto it = truth_by_stem.find(p.stem().string());
    if (it == truth_by_stem.end()) {
      throw Error("no truth mask for '" + p.filename().string() + "' in '" +
                  truth_dir.string() + "'");
    }
    const ScalarMap pm = read_binary_mask(p);
    const ScalarMap tm = read_binary_mask(it->second);
    if (!pm.same_shape(tm)) {
      throw Error("mask '" + p.filename().string() + "' is " +
                  std::to_string(pm.width()) + "x" + std::to_string(pm.height()) +
                  " but its truth is " + std::to_string(tm.width()) + "x" +
                  std::to_string(tm.height()));
    }
    const PrfScores s = evaluate_prf(pm, tm);
    report.mean.precision += s.precision;
    report.mean.recall += s.recall;
    report.mean.f1 += s.f1;
    report.mean.true_positive += s.true_positive;
    report.mean.false_positive += s.false_positive;
    report.mean.false_negative += s.false_negative;
    ++report.frames;
  }
  if (report.frames == 0) {
    throw Error("no prediction masks in '" + pred_dir.string() + "'");
  }
  const double n = static_cast<double>(report.frames);
  report.mean.precision /= n;
  report.mean.recall /= n;
  report.mean.f1 /= n;
  return report;
}

}  // namespace szoom

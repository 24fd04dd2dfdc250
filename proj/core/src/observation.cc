#include "szoom/observation.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "json.hpp"

namespace szoom {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Detection streams

DetectionIndex::DetectionIndex(std::vector<DetectionRecord> records)
    : records_(std::move(records)) {
  std::stable_sort(records_.begin(), records_.end(),
                   [](const DetectionRecord& a, const DetectionRecord& b) {
                     return a.frame < b.frame;
                   });
  std::size_t i = 0;
  while (i < records_.size()) {
    std::size_t j = i;
    while (j < records_.size() && records_[j].frame == records_[i].frame) ++j;
    by_frame_[records_[i].frame] = {i, j};
    i = j;
  }
}

std::vector<DetectionRecord> DetectionIndex::find(
    std::int64_t frame, const std::string& kind) const {
  std::vector<DetectionRecord> out;
  const auto it = by_frame_.find(frame);
  if (it == by_frame_.end()) return out;
  for (std::size_t i = it->second.first; i < it->second.second; ++i) {
    if (records_[i].kind == kind) out.push_back(records_[i]);
  }
  return out;
}

std::vector<std::string> DetectionIndex::kinds() const {
  std::set<std::string> seen;
  for (const auto& r : records_) seen.insert(r.kind);
  return {seen.begin(), seen.end()};
}

namespace {

[[noreturn]] void stream_error(std::size_t line, const std::string& msg) {
  throw Error("detection stream line " + std::to_string(line) + ": " + msg);
}

int require_int(const json& obj, const char* key, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end()) stream_error(line, std::string("missing field '") + key + "'");
  if (!it->is_number_integer()) {
    stream_error(line, std::string("field '") + key + "' must be an integer");
  }
  const auto v = it->get<std::int64_t>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    stream_error(line, std::string("field '") + key + "' out of range");
  }
  return static_cast<int>(v);
}

}  // namespace

DetectionIndex read_detection_stream(std::istream& in, int frame_w,
                                     int frame_h) {
  std::vector<DetectionRecord> records;
  std::string text;
  std::size_t line = 0;
  std::int64_t previous = std::numeric_limits<std::int64_t>::min();
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      stream_error(line, std::string("invalid JSON (") + e.what() + ")");
    }
    if (!obj.is_object()) stream_error(line, "expected a JSON object");

    DetectionRecord rec;
    const auto frame_it = obj.find("frame");
    if (frame_it == obj.end() || !frame_it->is_number_integer()) {
      stream_error(line, "field 'frame' must be an integer");
    }
    rec.frame = frame_it->get<std::int64_t>();
    if (rec.frame < 0) stream_error(line, "frame index must be >= 0");
    if (rec.frame < previous) {
      stream_error(line, "frame " + std::to_string(rec.frame) +
                             " is out of order (previous record has frame " +
                             std::to_string(previous) + ")");
    }
    previous = rec.frame;

    const auto kind_it = obj.find("kind");
    if (kind_it == obj.end() || !kind_it->is_string() ||
        kind_it->get<std::string>().empty()) {
      stream_error(line, "field 'kind' must be a non-empty string");
    }
    rec.kind = kind_it->get<std::string>();
    rec.rect = {require_int(obj, "x", line), require_int(obj, "y", line),
                require_int(obj, "w", line), require_int(obj, "h", line)};
    if (rec.rect.w < 1 || rec.rect.h < 1) {
      stream_error(line, "w and h must be >= 1");
    }
    if (const auto c = obj.find("confidence"); c != obj.end()) {
      if (!c->is_number()) stream_error(line, "field 'confidence' must be a number");
      rec.confidence = c->get<double>();
      if (!(rec.confidence >= 0.0 && rec.confidence <= 1.0)) {
        stream_error(line, "confidence must lie in [0, 1]");
      }
    }
    if (frame_w > 0 && frame_h > 0) {
      const Rect frame_rect{0, 0, frame_w, frame_h};
      if (intersection_area(rec.rect, frame_rect) == 0) {
        stream_error(line, "rectangle " + to_string(rec.rect) +
                               " lies outside the " + std::to_string(frame_w) +
                               "x" + std::to_string(frame_h) + " frame");
      }
      const int x0 = std::max(rec.rect.x, 0);
      const int y0 = std::max(rec.rect.y, 0);
      const int x1 = std::min(rec.rect.right(), frame_w);
      const int y1 = std::min(rec.rect.bottom(), frame_h);
      rec.rect = {x0, y0, x1 - x0, y1 - y0};
    }
    records.push_back(std::move(rec));
  }
  return DetectionIndex(std::move(records));
}

DetectionIndex read_detection_file(const std::string& path, int frame_w,
                                   int frame_h) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open detection stream '" + path + "'");
  return read_detection_stream(in, frame_w, frame_h);
}

std::string format_detection(const DetectionRecord& rec) {
  nlohmann::ordered_json j;
  j["frame"] = rec.frame;
  j["kind"] = rec.kind;
  j["x"] = rec.rect.x;
  j["y"] = rec.rect.y;
  j["w"] = rec.rect.w;
  j["h"] = rec.rect.h;
  j["confidence"] = rec.confidence;
  return j.dump();
}

ScalarMap rasterize(std::span<const DetectionRecord> detections, int frame_w,
                    int frame_h) {
  const Rect frame_rect{0, 0, frame_w, frame_h};
  std::vector<Rect> rects;
  rects.reserve(detections.size());
  for (const auto& d : detections) {
    if (d.frame != detections.front().frame ||
        d.kind != detections.front().kind) {
      throw Error("rasterize: records must share frame index and kind");
    }
    if (!frame_rect.contains(d.rect)) {
      throw Error("rasterize: rectangle " + to_string(d.rect) +
                  " does not fit the " + std::to_string(frame_w) + "x" +
                  std::to_string(frame_h) + " frame");
    }
    rects.push_back(d.rect);
  }
  return rasterize_rects(rects, frame_w, frame_h);
}

ScalarMap rasterize_rects(std::span<const Rect> rects, int width, int height) {
  ScalarMap out;
  rasterize_rects(rects, width, height, out);
  return out;
}

void rasterize_rects(std::span<const Rect> rects, int width, int height, ScalarMap& out) {
  if (out.width() != width || out.height() != height) {
    out = ScalarMap(width, height);
  } else {
    std::fill(out.mutable_values().begin(), out.mutable_values().end(), 0.0);
  }
  auto v = out.mutable_values();
  for (const Rect& r : rects) {
    const int x0 = std::max(r.x, 0);
    const int y0 = std::max(r.y, 0);
    const int x1 = std::min(r.right(), width);
    const int y1 = std::min(r.bottom(), height);
    if (x0 >= x1) continue;
    for (int y = y0; y < y1; ++y) {
      auto row = v.subspan(static_cast<std::size_t>(y) * width + x0, x1 - x0);
      std::fill(row.begin(), row.end(), 1.0);
    }
  }
}

// ---------------------------------------------------------------------------
// Mixture of Gaussians

MogModel::MogModel(int width, int height, MogParams params)
    : width_(width), height_(height), params_(params) {
  if (width < 1 || height < 1) throw Error("MogModel: bad dimensions");
  if (params.components < 1) throw Error("MogModel: need at least one component");
  if (!(params.learning_rate > 0.0 && params.learning_rate < 1.0)) {
    throw Error("MogModel: learning rate must lie in (0, 1)");
  }
  const std::size_t n = static_cast<std::size_t>(width) * height;
  const std::size_t k = static_cast<std::size_t>(params.components);
  weight_.assign(n * k, 0.0f);
  mean_.assign(n * k * 3, 0.0f);
  var_.assign(n * k, static_cast<float>(params.initial_variance));
  active_.assign(n, 0);
}

std::vector<float> MogModel::weights_at(int x, int y) const {
  const std::size_t k = static_cast<std::size_t>(params_.components);
  const std::size_t base = (static_cast<std::size_t>(y) * width_ + x) * k;
  return {weight_.begin() + base, weight_.begin() + base + k};
}

void MogModel::apply(const Frame& frame, BinaryMask& foreground) {
  if (frame.width() != width_ || frame.height() != height_) {
    throw Error("MogModel::apply: frame size does not match the model");
  }
  if (foreground.width() != width_ || foreground.height() != height_) {
    foreground = BinaryMask(width_, height_);
  }
  const int kmax = params_.components;
  const float lr = static_cast<float>(params_.learning_rate);
  const float gate = static_cast<float>(params_.variance_threshold *
                                        params_.variance_threshold * 3.0);
  const float init_var = static_cast<float>(params_.initial_variance);
  const float min_var = static_cast<float>(params_.min_variance);
  const float max_var = static_cast<float>(params_.max_variance);
  const float bg_ratio = static_cast<float>(params_.background_ratio);
  const float prune = static_cast<float>(params_.learning_rate * 1e-3);

  const std::size_t n = static_cast<std::size_t>(width_) * height_;
  const auto pixels = frame.pixels();
  auto& fg = foreground.bits();

  for (std::size_t p = 0; p < n; ++p) {
    float* w = &weight_[p * kmax];
    float* mu = &mean_[p * kmax * 3];
    float* var = &var_[p * kmax];
    int active = active_[p];
    const float x0 = pixels[p * 3 + 0];
    const float x1 = pixels[p * 3 + 1];
    const float x2 = pixels[p * 3 + 2];

    if (active == 0) {
      w[0] = 1.0f;
      mu[0] = x0;
      mu[1] = x1;
      mu[2] = x2;
      var[0] = init_var;
      active_[p] = 1;
      fg[p] = 0;
      continue;
    }

    int match = -1;
    bool match_is_bg = false;
    float d2_match = 0.0f;
    float cumulative = 0.0f;
    for (int k = 0; k < active; ++k) {
      const bool is_bg = cumulative < bg_ratio;
      cumulative += w[k];
      const float d0 = x0 - mu[k * 3 + 0];
      const float d1 = x1 - mu[k * 3 + 1];
      const float d2 = x2 - mu[k * 3 + 2];
      const float dist = d0 * d0 + d1 * d1 + d2 * d2;
      if (dist < gate * var[k]) {
        match = k;
        match_is_bg = is_bg;
        d2_match = dist;
        break;
      }
    }
    fg[p] = match_is_bg ? 0 : 1;

    const float keep = 1.0f - lr;
    for (int k = 0; k < active; ++k) w[k] *= keep;

    int moved;
    if (match >= 0) {
      w[match] += lr;
      const float rho = std::min(1.0f, lr / w[match]);
      mu[match * 3 + 0] += rho * (x0 - mu[match * 3 + 0]);
      mu[match * 3 + 1] += rho * (x1 - mu[match * 3 + 1]);
      mu[match * 3 + 2] += rho * (x2 - mu[match * 3 + 2]);
      var[match] = std::clamp(var[match] + rho * (d2_match / 3.0f - var[match]),
                              min_var, max_var);
      moved = match;
    } else {
      const int slot = active < kmax ? active++ : kmax - 1;
      w[slot] = lr;
      mu[slot * 3 + 0] = x0;
      mu[slot * 3 + 1] = x1;
      mu[slot * 3 + 2] = x2;
      var[slot] = init_var;
      moved = slot;
    }

    // Only the touched component gained weight; bubble it into rank order.
    for (int k = moved; k > 0 && w[k] > w[k - 1]; --k) {
      std::swap(w[k], w[k - 1]);
      std::swap(var[k], var[k - 1]);
      for (int c = 0; c < 3; ++c) std::swap(mu[k * 3 + c], mu[(k - 1) * 3 + c]);
    }
    while (active > 1 && w[active - 1] < prune) {
      w[active - 1] = 0.0f;
      --active;
    }
    float total = 0.0f;
    for (int k = 0; k < active; ++k) total += w[k];
    const float inv = 1.0f / total;
    for (int k = 0; k < active; ++k) w[k] *= inv;
    active_[p] = static_cast<std::uint8_t>(active);
  }
  ++frames_seen_;
}

// ---------------------------------------------------------------------------
// Motion detector

int grid_extent(int full, double scale) {
  return std::max(1, round_half_up(full * scale));
}

MotionDetector::MotionDetector(int frame_w, int frame_h, double scale,
                               MogParams params)
    : frame_w_(frame_w),
      frame_h_(frame_h),
      scale_(scale),
      grid_w_(grid_extent(frame_w, scale)),
      grid_h_(grid_extent(frame_h, scale)),
      model_(grid_w_, grid_h_, params),
      foreground_(grid_w_, grid_h_) {
  if (!(scale > 0.0 && scale <= 1.0)) {
    throw Error("MotionDetector: scale must lie in (0, 1]");
  }
}

void MotionDetector::learn(const Frame& frame) {
  if (frame.width() != frame_w_ || frame.height() != frame_h_) {
    throw Error("MotionDetector: frame size changed mid-stream");
  }
  if (grid_w_ == frame_w_ && grid_h_ == frame_h_) {
    model_.apply(frame, foreground_);
  } else {
    downscale_area(frame, grid_w_, grid_h_, scaled_);
    model_.apply(scaled_, foreground_);
  }
}

std::vector<Rect> MotionDetector::detect_grid(const Frame& frame) {
  learn(frame);
  const BinaryMask cleaned = dilate3x3(erode3x3(foreground_));
  return outer_border_boxes(cleaned);
}

std::vector<Rect> MotionDetector::detect(const Frame& frame) {
  auto rects = detect_grid(frame);
  for (Rect& r : rects) {
    r = clamp_rect(scale_rect(r, 1.0 / scale_), frame_w_, frame_h_);
  }
  return rects;
}

ScalarMap MotionDetector::detect_map(const Frame& frame) {
  const auto rects = detect(frame);
  return rasterize_rects(rects, frame_w_, frame_h_);
}

void MotionDetector::detect_map(const Frame& frame, ScalarMap& out) {
  const auto rects = detect(frame);
  rasterize_rects(rects, frame_w_, frame_h_, out);
}

// ---------------------------------------------------------------------------
// Accumulation

Accumulator::Accumulator(std::string kind, int omega)
    : kind_(std::move(kind)), omega_(omega) {
  if (omega < 1) throw Error("Accumulator: omega must be >= 1");
}

ScalarMap Accumulator::push(const ScalarMap& binary_map) {
  if (!window_.empty() && (window_.front().width() != binary_map.width() ||
                           window_.front().height() != binary_map.height())) {
    throw Error("Accumulator(" + kind_ + "): map dimensions changed");
  }
  BinaryMask bits = BinaryMask::threshold(binary_map, 0.5);
  if (counts_.size() != bits.bits().size()) counts_.assign(bits.bits().size(), 0);
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += bits.bits()[i];
  window_.push_back(std::move(bits));
  if (window_.size() > static_cast<std::size_t>(omega_)) {
    const auto& old = window_.front().bits();
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] -= old[i];
    window_.pop_front();
  }
  return current();
}

ScalarMap Accumulator::current() const {
  if (window_.empty()) return {};
  const int w = window_.front().width();
  const int h = window_.front().height();
  const double n = static_cast<double>(window_.size());
  ScalarMap out(w, h);
  auto v = out.mutable_values();
  for (std::size_t i = 0; i < counts_.size(); ++i) v[i] = counts_[i] / n;
  return out;
}

void Accumulator::reset() {
  window_.clear();
  counts_.clear();
}

// ---------------------------------------------------------------------------
// Evaluation

PrfScores evaluate_prf(const ScalarMap& pred, const ScalarMap& truth) {
  require_same_shape(pred, truth, "evaluate_prf");
  PrfScores s;
  const auto p = pred.values();
  const auto t = truth.values();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const bool pv = p[i] >= 0.5;
    const bool tv = t[i] >= 0.5;
    if (pv && tv) ++s.true_positive;
    else if (pv) ++s.false_positive;
    else if (tv) ++s.false_negative;
  }
  const auto tp = static_cast<double>(s.true_positive);
  const bool pred_empty = s.true_positive + s.false_positive == 0;
  const bool truth_empty = s.true_positive + s.false_negative == 0;
  s.precision = pred_empty ? (truth_empty ? 1.0 : 0.0)
                           : tp / (tp + static_cast<double>(s.false_positive));
  s.recall = truth_empty ? (pred_empty ? 1.0 : 0.0)
                         : tp / (tp + static_cast<double>(s.false_negative));
  s.f1 = s.precision + s.recall > 0.0
             ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
             : 0.0;
  return s;
}

}  // namespace szoom

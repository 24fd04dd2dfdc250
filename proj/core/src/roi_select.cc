#include "szoom/roi_select.h"

#include <algorithm>

#include "szoom/contours.h"

namespace szoom {

std::vector<Rect> merge_nearby(std::vector<Rect> boxes, int merge_dist) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      for (std::size_t j = i + 1; j < boxes.size();) {
        if (gap(boxes[i], boxes[j]) < merge_dist) {
          boxes[i] = bounding_union(boxes[i], boxes[j]);
          boxes.erase(boxes.begin() + static_cast<std::ptrdiff_t>(j));
          changed = true;
          j = i + 1;  // boxes[i] grew; recheck everything after it
        } else {
          ++j;
        }
      }
    }
  }
  return boxes;
}

bool candidate_before(const CandidateRoi& a, const CandidateRoi& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.rect.area() != b.rect.area()) return a.rect.area() > b.rect.area();
  if (a.rect.y != b.rect.y) return a.rect.y < b.rect.y;
  return a.rect.x < b.rect.x;
}

namespace {

class IntegralImage {
 public:
  explicit IntegralImage(const ScalarMap& map)
      : w_(map.width() + 1), sums_(static_cast<std::size_t>(w_) * (map.height() + 1), 0.0) {
    for (int y = 0; y < map.height(); ++y) {
      double row = 0.0;
      const auto src = map.row(y);
      for (int x = 0; x < map.width(); ++x) {
        row += src[x];
        at(x + 1, y + 1) = at(x + 1, y) + row;
      }
    }
  }
  double sum(const Rect& r) const {
    return at(r.right(), r.bottom()) - at(r.x, r.bottom()) -
           at(r.right(), r.y) + at(r.x, r.y);
  }

 private:
  double& at(int x, int y) { return sums_[static_cast<std::size_t>(y) * w_ + x]; }
  double at(int x, int y) const {
    return sums_[static_cast<std::size_t>(y) * w_ + x];
  }
  int w_;
  std::vector<double> sums_;
};

}  // namespace

std::vector<CandidateRoi> extract_candidates(const ScalarMap& decision,
                                             const CandidateParams& params) {
  if (!(params.threshold > 0.0 && params.threshold < 1.0)) {
    throw Error("extract_candidates: threshold must lie in (0, 1)");
  }
  if (decision.empty()) return {};
  const BinaryMask binary = BinaryMask::threshold(decision, params.threshold);
  auto boxes = merge_nearby(outer_border_boxes(binary), params.merge_dist);

  const IntegralImage integral(decision);
  std::vector<CandidateRoi> out;
  for (const Rect& box : boxes) {
    if (static_cast<double>(box.area()) < params.min_area) continue;
    out.push_back({box, std::max(0.0, integral.sum(box))});
  }
  std::sort(out.begin(), out.end(), candidate_before);
  return out;
}

std::optional<Rect> select_target(const std::vector<CandidateRoi>& candidates,
                                  double target_aspect, int frame_w,
                                  int frame_h) {
  if (candidates.empty()) return std::nullopt;
  return adjust_aspect(candidates.front().rect, target_aspect, frame_w,
                       frame_h);
}

}  // namespace szoom

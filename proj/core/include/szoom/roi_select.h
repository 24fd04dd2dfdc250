#ifndef SZOOM_ROI_SELECT_H_
#define SZOOM_ROI_SELECT_H_

#include <optional>
#include <vector>

#include "szoom/geometry.h"

namespace szoom {

struct CandidateRoi {
  Rect rect;
  // Sum of the decision map over rect, before thresholding.
  double score = 0.0;

  friend bool operator==(const CandidateRoi&, const CandidateRoi&) = default;
};

struct CandidateParams {
  double threshold = 0.2;
  // Boxes whose border gap is below this are merged (map pixels).
  int merge_dist = 16;
  // Boxes smaller than this are dropped (map pixels squared).
  double min_area = 0.0;
};

// Repeatedly replaces any two boxes closer than merge_dist with their joint
// bounding box until no pair qualifies.
std::vector<Rect> merge_nearby(std::vector<Rect> boxes, int merge_dist);

// Ranking used by extract_candidates: score descending, then larger area,
// then top-left position in raster order.
bool candidate_before(const CandidateRoi& a, const CandidateRoi& b);

// Threshold, border following, merge, size filter, score and sort.
std::vector<CandidateRoi> extract_candidates(const ScalarMap& decision,
                                             const CandidateParams& params);

// Aspect-adjusted and clamped rectangle from the best candidate; nullopt when
// there are no candidates.
std::optional<Rect> select_target(const std::vector<CandidateRoi>& candidates,
                                  double target_aspect, int frame_w,
                                  int frame_h);

}  // namespace szoom

#endif  // SZOOM_ROI_SELECT_H_

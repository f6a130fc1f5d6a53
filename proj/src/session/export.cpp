// SPDX-License-Identifier: Apache-2.0

#include "uat/session/export.hpp"

namespace uat::session {

std::vector<eval::RatingRow> rating_rows(std::span<const SessionRecord> sessions) {
  std::vector<eval::RatingRow> rows;
  for (const auto& s : sessions) {
    if (!s.finished) throw SessionError(SessionErrc::UnfinishedSession, "session " + s.session_id + " is not finished");
    for (const auto& r : s.ratings)
      rows.push_back({s.participant_id, s.session_id, r.scenario_id, r.variant, r.construct, r.item_index,
                      r.ui_position, eval::map_rating(r.ui_position, r.variant)});
  }
  return rows;
}

std::string export_ratings(std::span<const SessionRecord> sessions) {
  return eval::write_ratings_csv(rating_rows(sessions));
}

}  // namespace uat::session

// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <vector>

#include "uat/eval/report.hpp"
#include "uat/session/events.hpp"

namespace uat::session {

/// One row per rated item of each session, in session then questionnaire
/// order. Throws SessionError(UnfinishedSession).
std::vector<eval::RatingRow> rating_rows(std::span<const SessionRecord> sessions);

/// CSV with header row; an empty session list yields the header only.
std::string export_ratings(std::span<const SessionRecord> sessions);

}  // namespace uat::session

// SPDX-License-Identifier: Apache-2.0

// Minimal RFC 4180 CSV: quoting on write, quoted fields on read.

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace uat::csv {

std::string escape(std::string_view field);
std::string join_row(const std::vector<std::string>& fields);

/// Splits a document into rows. Quoted fields may contain commas, quotes
/// and line breaks. A trailing newline does not start a row. Throws
/// std::runtime_error on an unterminated quote.
std::vector<std::vector<std::string>> parse(std::string_view text);

}  // namespace uat::csv

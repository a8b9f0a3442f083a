// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#pragma once

#include <initializer_list>
#include <string>
#include <string_view>

namespace patchsieve {

std::string sha256_hex(std::string_view data);

// Stable id for a record: sha256 over the parts joined with a separator that
// cannot appear inside them ambiguously (each part is length-prefixed).
// Truncated to 32 hex chars.
std::string content_id(std::initializer_list<std::string_view> parts);

}  // namespace patchsieve

namespace patchsieve {
namespace core = ::patchsieve;
}

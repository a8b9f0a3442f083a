// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#pragma once

#include <string>

#include "patchsieve/scorer/types.hpp"

namespace patchsieve::scorer {

struct PromptInputs {
    std::string commit_message;
    std::string original_code;  // state before the change
    std::string revised_code;   // state after the change
    std::string context;        // sibling functions from the same commit
};

// Fills the assessment template for the given variant. Empty code sides
// render as "(function absent in this version)" and an empty context as
// "(none)". Variants that drop the commit message or the context drop the
// whole block, header line included.
std::string build_prompt(const PromptVariant& variant, const PromptInputs& in);

}  // namespace patchsieve::scorer

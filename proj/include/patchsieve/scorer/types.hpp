// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#pragma once

#include <string>

#include "patchsieve/core/jsonl.hpp"

namespace patchsieve::scorer {

// Range04 asks for 0-4, Binary for 0/1.
enum class PromptMode { Range04, Binary };

const char* prompt_mode_name(PromptMode mode);
PromptMode prompt_mode_from_name(const std::string& name);
int max_score_for(PromptMode mode);

// One prompt configuration. Besides the output scale, the commit-message
// and sibling-context blocks can each be dropped from the prompt, which
// covers every ablation the pipeline supports.
struct PromptVariant {
    PromptMode output_mode = PromptMode::Range04;
    bool include_commit_message = true;
    bool include_context = true;

    bool operator==(const PromptVariant&) const = default;
};

// Canonical wire name, e.g. "range04", "range04-nomsg-noctx", "binary".
// It doubles as the checkpoint variant tag, so renaming a component
// invalidates old checkpoints.
std::string variant_id(const PromptVariant& variant);
PromptVariant variant_from_id(const std::string& id);

struct ScoreRecord {
    std::string change_id;
    int score = 0;
    std::string provider_id;
    std::string variant;  // variant_id() of the producing configuration
    int attempts = 1;     // provider calls spent on this change
    std::string raw_response;
};

core::json score_to_json(const ScoreRecord& r);
ScoreRecord score_from_json(const core::json& j, const std::string& where);

}  // namespace patchsieve::scorer

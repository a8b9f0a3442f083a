// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#include "patchsieve/scorer/types.hpp"

#include <sstream>
#include <stdexcept>

namespace patchsieve::scorer {

const char* prompt_mode_name(PromptMode mode) {
    return mode == PromptMode::Binary ? "binary" : "range04";
}

PromptMode prompt_mode_from_name(const std::string& name) {
    if (name == "range04") return PromptMode::Range04;
    if (name == "binary") return PromptMode::Binary;
    throw std::invalid_argument("unknown prompt mode: " + name);
}

int max_score_for(PromptMode mode) { return mode == PromptMode::Binary ? 1 : 4; }

std::string variant_id(const PromptVariant& variant) {
    std::string id = prompt_mode_name(variant.output_mode);
    if (!variant.include_commit_message) id += "-nomsg";
    if (!variant.include_context) id += "-noctx";
    return id;
}

PromptVariant variant_from_id(const std::string& id) {
    PromptVariant variant;
    std::istringstream in(id);
    std::string token;
    bool first = true;
    while (std::getline(in, token, '-')) {
        if (first) {
            variant.output_mode = prompt_mode_from_name(token);
            first = false;
        } else if (token == "nomsg") {
            variant.include_commit_message = false;
        } else if (token == "noctx") {
            variant.include_context = false;
        } else {
            throw std::invalid_argument("unknown variant id: " + id);
        }
    }
    if (first) throw std::invalid_argument("empty variant id");
    return variant;
}

core::json score_to_json(const ScoreRecord& r) {
    core::json j;
    j["change_id"] = r.change_id;
    j["score"] = r.score;
    j["provider_id"] = r.provider_id;
    j["variant"] = r.variant;
    j["attempts"] = r.attempts;
    j["raw_response"] = r.raw_response;
    return j;
}

ScoreRecord score_from_json(const core::json& j, const std::string& where) {
    ScoreRecord r;
    r.change_id = core::require_string(j, "change_id", where);
    r.score = static_cast<int>(core::require_int(j, "score", where));
    r.provider_id = core::require_string(j, "provider_id", where);
    r.variant = core::require_string(j, "variant", where);
    r.attempts = static_cast<int>(core::require_int(j, "attempts", where));
    r.raw_response = core::require_string(j, "raw_response", where);
    return r;
}

}  // namespace patchsieve::scorer

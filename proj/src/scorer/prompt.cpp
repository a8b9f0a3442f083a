// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#include "patchsieve/scorer/prompt.hpp"

#include <vector>

namespace patchsieve::scorer {

namespace {

// The two template heads, verbatim. The full prompt is the head plus the
// commit-message, original, revised, and context blocks joined by blank
// lines; variants drop whole blocks.
constexpr const char* kRangeHead =
    R"(As a cybersecurity expert, analyze the provided "Original" and "Revised" code snippets from a commit along with the commit message and other functions in the same commit, where the "Original" code represents the state prior to the changes, and the "Revised" code represents the state after the changes. Evaluate the changes made in terms of vulnerability fixing on a scale of 0-4. The length of the code snippet should not influence your assessment; focus on evaluating the logic line by line.

- A score of 0 indicates that the changes made from the "Original" code to the "Revised" code are not related to fixing vulnerabilities.
- A score of 4 indicates that the changes made from the "Original" code to the "Revised" code are clearly focused on fixing vulnerabilities.)";

constexpr const char* kBinaryHead =
    R"(As a cybersecurity expert, analyze the provided "Original" and "Revised" code snippets from a commit, along with the commit message and other functions in the same commit. The "Original" code represents the state before the changes, while the "Revised" code represents the state after the changes. Determine if the changes are focused on fixing vulnerabilities; if so, output 1, otherwise output 0. The length of the code snippet should not influence your assessment; concentrate on evaluating the logic line by line.

- A score of 0 indicates that the changes made from the "Original" code to the "Revised" code do not address vulnerability fixes.
- A score of 1 indicates that the changes made from the "Original" code to the "Revised" code are aimed at fixing vulnerabilities.)";

constexpr const char* kAnswerInstruction =
    "\n\nRespond with the score as the final line, digits only.";

}  // namespace

std::string build_prompt(const PromptVariant& variant, const PromptInputs& in) {
    const std::string absent = "(function absent in this version)";
    std::vector<std::string> blocks;
    blocks.push_back(variant.output_mode == PromptMode::Binary ? kBinaryHead : kRangeHead);
    if (variant.include_commit_message) {
        blocks.push_back("Commit Message:\n" + in.commit_message);
    }
    blocks.push_back("Original code snippet (code before changes):\n" +
                     (in.original_code.empty() ? absent : in.original_code));
    blocks.push_back("Revised code snippet (code after changes):\n" +
                     (in.revised_code.empty() ? absent : in.revised_code));
    if (variant.include_context) {
        blocks.push_back("Here are the other functions in the same commit:\n" +
                         (in.context.empty() ? "(none)" : in.context));
    }

    std::string text;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (i > 0) text += "\n\n";
        text += blocks[i];
    }
    text += kAnswerInstruction;
    return text;
}

}  // namespace patchsieve::scorer

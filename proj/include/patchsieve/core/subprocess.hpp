// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#pragma once

#include <string>
#include <utility>
#include <vector>

namespace patchsieve {

struct CommandResult {
    int exit_code = -1;
    std::string out;
    std::string err;

    bool ok() const { return exit_code == 0; }
};

// Runs argv[0] with the given arguments (no shell involved). `env_overrides`
// entries are added to the inherited environment. Throws std::runtime_error
// if the process cannot be spawned.
CommandResult run_command(const std::vector<std::string>& argv,
                          const std::string& cwd = "",
                          const std::vector<std::pair<std::string, std::string>>& env_overrides = {});

}  // namespace patchsieve

namespace patchsieve {
namespace core = ::patchsieve;
}

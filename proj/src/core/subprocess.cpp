// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#include "patchsieve/core/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

extern char** environ;

namespace patchsieve {

namespace {

[[noreturn]] void child_exec(const std::vector<std::string>& argv, const std::string& cwd,
                             const std::vector<std::pair<std::string, std::string>>& env_overrides,
                             int out_fd, int err_fd) {
    if (!cwd.empty() && chdir(cwd.c_str()) != 0) _exit(127);
    dup2(out_fd, STDOUT_FILENO);
    dup2(err_fd, STDERR_FILENO);
    int devnull = open("/dev/null", O_RDONLY);
    if (devnull >= 0) dup2(devnull, STDIN_FILENO);

    for (const auto& [k, v] : env_overrides) setenv(k.c_str(), v.c_str(), 1);

    std::vector<char*> args;
    args.reserve(argv.size() + 1);
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);
    execvp(args[0], args.data());
    _exit(127);
}

}  // namespace

CommandResult run_command(const std::vector<std::string>& argv, const std::string& cwd,
                          const std::vector<std::pair<std::string, std::string>>& env_overrides) {
    if (argv.empty()) throw std::runtime_error("run_command: empty argv");

    int out_pipe[2], err_pipe[2];
    if (pipe(out_pipe) != 0 || pipe(err_pipe) != 0)
        throw std::runtime_error("run_command: pipe failed: " + std::string(strerror(errno)));

    pid_t pid = fork();
    if (pid < 0) throw std::runtime_error("run_command: fork failed: " + std::string(strerror(errno)));
    if (pid == 0) {
        close(out_pipe[0]);
        close(err_pipe[0]);
        child_exec(argv, cwd, env_overrides, out_pipe[1], err_pipe[1]);
    }

    close(out_pipe[1]);
    close(err_pipe[1]);

    CommandResult result;
    struct pollfd fds[2] = {{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}};
    bool open_fds[2] = {true, true};
    char buf[8192];
    while (open_fds[0] || open_fds[1]) {
        fds[0].events = open_fds[0] ? POLLIN : 0;
        fds[1].events = open_fds[1] ? POLLIN : 0;
        if (poll(fds, 2, -1) < 0) {
            if (errno == EINTR) continue;
            break;
        }
        for (int i = 0; i < 2; ++i) {
            if (!open_fds[i] || !(fds[i].revents & (POLLIN | POLLHUP))) continue;
            ssize_t n = read(fds[i].fd, buf, sizeof(buf));
            if (n > 0) {
                (i == 0 ? result.out : result.err).append(buf, static_cast<size_t>(n));
            } else {
                open_fds[i] = false;
            }
        }
    }
    close(out_pipe[0]);
    close(err_pipe[0]);

    int status = 0;
    while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {}
    if (WIFEXITED(status))
        result.exit_code = WEXITSTATUS(status);
    else if (WIFSIGNALED(status))
        result.exit_code = 128 + WTERMSIG(status);
    return result;
}

}  // namespace patchsieve

#ifndef LATUNE_PROCESS_HPP
#define LATUNE_PROCESS_HPP

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <map>
#include <string>
#include <vector>

extern char** environ;

namespace latune {

struct ExecRequest {
  std::vector<std::string> argv;
  std::string workdir;                       // empty: inherit
  std::map<std::string, std::string> env;    // added on top of the inherited env
  double deadline_seconds = 0.0;
  double grace_seconds = 1.0;                // TERM at deadline, KILL after grace
};

struct ExecResult {
  bool spawn_failed = false;
  bool timed_out = false;
  bool signaled = false;
  int exit_code = -1;
  std::string output;  // stdout and stderr, interleaved
  double wall_seconds = 0.0;
};

/// Run a command in its own process group, capture its combined output, and
/// enforce a wall-clock deadline. The whole group is killed on the way out,
/// so no descendant survives the call.
inline ExecResult run_with_deadline(const ExecRequest& req) {
  ExecResult result;
  if (req.argv.empty()) {
    result.spawn_failed = true;
    return result;
  }

  // close-on-exec keeps concurrently spawned children from inheriting each
  // other's pipe ends, which would stall EOF detection on siblings
  int fds[2];
  if (pipe2(fds, O_CLOEXEC) != 0) {
    result.spawn_failed = true;
    return result;
  }

  std::vector<char*> argv_c;
  argv_c.reserve(req.argv.size() + 1);
  for (const auto& a : req.argv) argv_c.push_back(const_cast<char*>(a.c_str()));
  argv_c.push_back(nullptr);

  std::vector<std::string> env_storage;
  for (char** e = environ; *e != nullptr; ++e) {
    const char* eq = std::strchr(*e, '=');
    if (eq == nullptr) continue;
    if (req.env.count(std::string(*e, eq - *e)) != 0) continue;  // overridden
    env_storage.emplace_back(*e);
  }
  for (const auto& [k, v] : req.env) env_storage.push_back(k + "=" + v);
  std::vector<char*> envp_c;
  envp_c.reserve(env_storage.size() + 1);
  for (auto& s : env_storage) envp_c.push_back(s.data());
  envp_c.push_back(nullptr);

  posix_spawn_file_actions_t fa;
  posix_spawn_file_actions_init(&fa);
  posix_spawn_file_actions_adddup2(&fa, fds[1], 1);
  posix_spawn_file_actions_adddup2(&fa, fds[1], 2);
  posix_spawn_file_actions_addclose(&fa, fds[1]);
  posix_spawn_file_actions_addclose(&fa, fds[0]);
  if (!req.workdir.empty()) {
    posix_spawn_file_actions_addchdir_np(&fa, req.workdir.c_str());
  }
  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
  posix_spawnattr_setpgroup(&attr, 0);  // own process group, pgid == pid

  pid_t pid = -1;
  int rc = 0;
  for (int attempt = 0; attempt < 10; ++attempt) {
    rc = posix_spawnp(&pid, argv_c[0], &fa, &attr, argv_c.data(),
                      envp_c.data());
    // ETXTBSY: another process briefly holds the executable open for writing
    if (rc != ETXTBSY && rc != EAGAIN && rc != EINTR) break;
    usleep(5 * 1000);
  }
  posix_spawn_file_actions_destroy(&fa);
  posix_spawnattr_destroy(&attr);
  close(fds[1]);
  if (rc != 0) {
    close(fds[0]);
    result.spawn_failed = true;
    return result;
  }

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&start] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  };
  const bool has_deadline = req.deadline_seconds < 1e17;

  bool eof = false;
  bool exited = false;
  bool term_sent = false;
  bool kill_sent = false;
  int status = 0;
  double exit_seconds = 0.0;
  constexpr std::size_t kMaxCapture = 64u << 20;
  char buf[8192];

  while (!(eof && exited)) {
    if (!eof) {
      pollfd pfd{fds[0], POLLIN, 0};
      const int pr = poll(&pfd, 1, 25);
      if (pr > 0) {
        const ssize_t n = read(fds[0], buf, sizeof buf);
        if (n > 0) {
          if (result.output.size() < kMaxCapture) {
            result.output.append(buf, static_cast<std::size_t>(n));
          }
        } else {
          eof = true;  // n == 0 on EOF; treat errors the same way
        }
      }
    } else {
      usleep(10 * 1000);
    }
    if (!exited) {
      const pid_t w = waitpid(pid, &status, WNOHANG);
      if (w == pid) {
        exited = true;
        exit_seconds = elapsed();
      }
    }
    if (has_deadline) {
      const double el = elapsed();
      if (!term_sent && el >= req.deadline_seconds) {
        kill(-pid, SIGTERM);
        term_sent = true;
      }
      if (!kill_sent && el >= req.deadline_seconds + req.grace_seconds) {
        kill(-pid, SIGKILL);
        kill_sent = true;
      }
      // escape hatch: everything is dead but a leaked pipe writer remains
      if (kill_sent && el >= req.deadline_seconds + req.grace_seconds + 1.0) {
        break;
      }
    }
  }

  if (!exited) {
    kill(-pid, SIGKILL);
    waitpid(pid, &status, 0);
    exit_seconds = elapsed();
  }
  // sweep any descendants still in the group
  kill(-pid, SIGKILL);
  close(fds[0]);

  result.wall_seconds = exit_seconds;
  result.timed_out = has_deadline && exit_seconds >= req.deadline_seconds;
  if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    result.signaled = true;
    result.exit_code = 128 + WTERMSIG(status);
  }
  return result;
}

}  // namespace latune

#endif  // LATUNE_PROCESS_HPP

#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <sys/types.h>

namespace boinit {

/// Child process started through /bin/sh -c with piped stdin/stdout.
/// The destructor closes the pipes and reaps the child, killing it if it
/// does not exit promptly.
class ChildProcess {
 public:
  explicit ChildProcess(const std::string& command);
  ~ChildProcess();

  ChildProcess(const ChildProcess&) = delete;
  ChildProcess& operator=(const ChildProcess&) = delete;

  /// Writes `line` plus a newline. Throws Error if the pipe is closed.
  void write_line(const std::string& line);

  /// Next line from the child's stdout without the newline. Returns nullopt
  /// on EOF or when the deadline passes; timed_out() tells the two apart.
  std::optional<std::string> read_line(std::chrono::milliseconds timeout);

  bool timed_out() const noexcept { return timed_out_; }
  void kill();
  pid_t pid() const noexcept { return pid_; }

 private:
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  bool timed_out_ = false;
};

}  // namespace boinit

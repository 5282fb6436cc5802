#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace memeground {

/// Root of every domain error raised by the library. The CLI maps these to
/// exit code 1; anything else escaping a subcommand is a bug.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TimestampError : public Error {
 public:
  using Error::Error;
};

class LakeError : public Error {
 public:
  LakeError(const std::string& what, std::filesystem::path path)
      : Error(what + ": " + path.string()), path_(std::move(path)) {}
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

/// Malformed file contents. `row()` is the 1-based row/line number when the
/// failure is attributable to one, else 0.
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what, std::size_t row = 0)
      : Error(row ? what + " (row " + std::to_string(row) + ")" : what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class NormalizationError : public Error {
 public:
  explicit NormalizationError(const std::string& what, std::string item_id = {})
      : Error(item_id.empty() ? what : what + " [" + item_id + "]"), item_id_(std::move(item_id)) {}
  const std::string& item_id() const noexcept { return item_id_; }

 private:
  std::string item_id_;
};

class EmbedError : public Error {
 public:
  using Error::Error;
};

class BuildError : public Error {
 public:
  using Error::Error;
};

class QueryError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// Raised when inputs that must cover a set of ids do not. Carries every
/// missing id, sorted.
class CoverageError : public Error {
 public:
  CoverageError(const std::string& what, std::vector<std::string> missing)
      : Error(describe(what, missing)), missing_(std::move(missing)) {}
  const std::vector<std::string>& missing() const noexcept { return missing_; }

 private:
  static std::string describe(const std::string& what, const std::vector<std::string>& ids) {
    std::string out = what + " (" + std::to_string(ids.size()) + " missing:";
    for (const auto& id : ids) out += " " + id;
    return out + ")";
  }

  std::vector<std::string> missing_;
};

class JoinError : public Error {
 public:
  using Error::Error;
};

class SelectionError : public Error {
 public:
  using Error::Error;
};

}  // namespace memeground

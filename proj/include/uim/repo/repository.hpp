#pragma once

// Repository backends and the snapshot cell sessions read from.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>

#include "uim/model/model.hpp"
#include "uim/model/parse.hpp"
#include "uim/model/validate.hpp"

namespace uim::repo {

/// An immutable, validated repository as served to sessions.
struct Snapshot {
  model::Catalog catalog;
  std::uint64_t version = 0;
  std::chrono::system_clock::time_point loaded_at;

  const model::RepositoryDoc& doc() const noexcept { return catalog.doc(); }
};

using SnapshotPtr = std::shared_ptr<const Snapshot>;

class LoadError : public std::runtime_error {
 public:
  enum class Kind { NoDocuments, Io, Parse, Generate, Invalid, ConflictingRoot };

  LoadError(Kind kind, std::string file, const std::string& message);
  LoadError(std::string file, const model::ParseError& parse);
  explicit LoadError(model::ValidationReport report);

  Kind kind() const noexcept { return kind_; }
  const std::string& file() const noexcept { return file_; }
  const std::optional<model::ParseError>& parse_error() const noexcept { return parse_; }
  const model::ValidationReport& report() const noexcept { return report_; }
  /// Short machine-friendly code: the parse/issue code or the kind name.
  std::string code() const;

 private:
  Kind kind_;
  std::string file_;
  std::optional<model::ParseError> parse_;
  model::ValidationReport report_;
};

struct Backend {
  enum class Kind { XmlDirectory, Tabular };
  Kind kind = Kind::XmlDirectory;
  std::filesystem::path path;

  /// "xml_dir:<path>" or "tabular:<path>"; a bare path picks by content.
  static Backend from_string(std::string_view text);
  /// Tabular if the directory holds a screens table, XML otherwise.
  static Backend detect(const std::filesystem::path& path);
};

/// Reads every *.xml in `dir` (sorted by name), merges and validates.
model::RepositoryDoc load_directory_doc(const std::filesystem::path& dir);
/// Loads through the given backend and validates; throws LoadError.
model::RepositoryDoc load_doc(const Backend& backend);

SnapshotPtr make_snapshot(model::RepositoryDoc doc, std::uint64_t version);

/// Directory load as a fresh snapshot at version 1.
SnapshotPtr load_directory(const std::filesystem::path& dir);

struct ReloadResult {
  SnapshotPtr snapshot;             // new snapshot, or the unchanged current one
  std::optional<LoadError> error;   // set when the reload failed
};

/// Shared cell holding the served snapshot. Readers take a reference-counted
/// pointer; reloads are serialized and a failed reload leaves it untouched.
class SnapshotStore {
 public:
  explicit SnapshotStore(Backend backend);

  /// Initial load; throws LoadError.
  void load();
  SnapshotPtr current() const;
  ReloadResult reload();
  const Backend& backend() const noexcept { return backend_; }

 private:
  Backend backend_;
  mutable std::mutex cell_mutex_;
  std::mutex reload_mutex_;
  SnapshotPtr current_;
};

}  // namespace uim::repo

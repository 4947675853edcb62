#include "uim/repo/repository.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "uim/repo/tabular.hpp"

namespace uim::repo {

namespace fs = std::filesystem;

namespace {

std::string_view kind_name(LoadError::Kind kind) {
  switch (kind) {
    case LoadError::Kind::NoDocuments: return "NoDocuments";
    case LoadError::Kind::Io: return "Io";
    case LoadError::Kind::Parse: return "Parse";
    case LoadError::Kind::Generate: return "Generate";
    case LoadError::Kind::Invalid: return "Invalid";
    case LoadError::Kind::ConflictingRoot: return "ConflictingRoot";
  }
  return "?";
}

std::string read_file(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw LoadError(LoadError::Kind::Io, file.string(), "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

model::RepositoryDoc validated(model::RepositoryDoc doc) {
  auto report = model::validate(doc);
  if (!report.clean()) throw LoadError(std::move(report));
  return doc;
}

}  // namespace

LoadError::LoadError(Kind kind, std::string file, const std::string& message)
    : std::runtime_error(file.empty() ? message : fmt::format("{}: {}", file, message)),
      kind_(kind),
      file_(std::move(file)) {}

LoadError::LoadError(std::string file, const model::ParseError& parse)
    : std::runtime_error(fmt::format("{}:{}", file, parse.what())), kind_(Kind::Parse), file_(std::move(file)), parse_(parse) {}

LoadError::LoadError(model::ValidationReport report)
    : std::runtime_error("repository failed validation:\n" + report.to_text()),
      kind_(Kind::Invalid),
      report_(std::move(report)) {}

std::string LoadError::code() const {
  if (parse_) return std::string(model::to_string(parse_->code()));
  if (kind_ == Kind::Invalid && !report_.issues.empty()) return std::string(model::to_string(report_.issues.front().code));
  return std::string(kind_name(kind_));
}

Backend Backend::from_string(std::string_view text) {
  if (text.starts_with("xml_dir:")) return {Kind::XmlDirectory, fs::path(text.substr(8))};
  if (text.starts_with("tabular:")) return {Kind::Tabular, fs::path(text.substr(8))};
  return detect(fs::path(text));
}

Backend Backend::detect(const fs::path& path) {
  return {fs::exists(path / "screens.psv") ? Kind::Tabular : Kind::XmlDirectory, path};
}

model::RepositoryDoc load_directory_doc(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw LoadError(LoadError::Kind::Io, dir.string(), "not a readable directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".xml") files.push_back(entry.path());
  }
  if (ec) throw LoadError(LoadError::Kind::Io, dir.string(), ec.message());
  if (files.empty()) throw LoadError(LoadError::Kind::NoDocuments, dir.string(), "no *.xml documents");
  std::sort(files.begin(), files.end());

  model::RepositoryDoc merged;
  for (const auto& file : files) {
    model::RepositoryDoc doc;
    try {
      doc = model::parse(read_file(file));
    } catch (const model::ParseError& e) {
      throw LoadError(file.string(), e);
    }
    if (merged.root_menu.empty()) {
      merged.root_menu = doc.root_menu;
    } else if (merged.root_menu != doc.root_menu) {
      throw LoadError(LoadError::Kind::ConflictingRoot, file.string(),
                      fmt::format("root '{}' conflicts with '{}'", doc.root_menu, merged.root_menu));
    }
    std::move(doc.screens.begin(), doc.screens.end(), std::back_inserter(merged.screens));
    std::move(doc.flows.begin(), doc.flows.end(), std::back_inserter(merged.flows));
  }
  return validated(std::move(merged));
}

model::RepositoryDoc load_doc(const Backend& backend) {
  if (backend.kind == Backend::Kind::XmlDirectory) return load_directory_doc(backend.path);
  std::string xml;
  try {
    xml = generate_xml(read_tabular(backend.path));
  } catch (const GenerateError& e) {
    throw LoadError(LoadError::Kind::Generate, (backend.path / (e.table() + ".psv")).string(), e.what());
  }
  try {
    return validated(model::parse(xml));
  } catch (const model::ParseError& e) {
    throw LoadError("(generated from " + backend.path.string() + ")", e);
  }
}

SnapshotPtr make_snapshot(model::RepositoryDoc doc, std::uint64_t version) {
  auto s = std::make_shared<Snapshot>();
  s->catalog = model::Catalog(std::move(doc));
  s->version = version;
  s->loaded_at = std::chrono::system_clock::now();
  return s;
}

SnapshotPtr load_directory(const fs::path& dir) { return make_snapshot(load_directory_doc(dir), 1); }

SnapshotStore::SnapshotStore(Backend backend) : backend_(std::move(backend)) {}

void SnapshotStore::load() {
  std::lock_guard reload_lock(reload_mutex_);
  auto snap = make_snapshot(load_doc(backend_), 1);
  std::lock_guard lock(cell_mutex_);
  current_ = std::move(snap);
}

SnapshotPtr SnapshotStore::current() const {
  std::lock_guard lock(cell_mutex_);
  return current_;
}

ReloadResult SnapshotStore::reload() {
  std::lock_guard reload_lock(reload_mutex_);
  auto current = this->current();
  try {
    auto doc = load_doc(backend_);
    auto snap = make_snapshot(std::move(doc), current ? current->version + 1 : 1);
    std::lock_guard lock(cell_mutex_);
    current_ = snap;
    return {snap, std::nullopt};
  } catch (const LoadError& e) {
    return {current, e};
  }
}

}  // namespace uim::repo

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "uim/model/model.hpp"

namespace uim::model {

enum class IssueCode {
  DanglingRef,
  DuplicateId,
  MenuCycle,
  EmptyScreen,
  TooManyItems,
  MissingOkTransition,
  NodeTargetsNonMenu,
};

std::string_view to_string(IssueCode code) noexcept;

struct Issue {
  IssueCode code;
  std::string where;  // screen or flow id the issue is attached to
  std::string message;
  bool operator==(const Issue&) const = default;
};

struct ValidationReport {
  std::vector<Issue> issues;
  /// Non-fatal findings, e.g. screens or flows nothing refers to.
  std::vector<std::string> warnings;

  bool clean() const noexcept { return issues.empty(); }
  bool has(IssueCode code) const;
  std::string to_text() const;
};

inline constexpr std::size_t kMaxEntries = 99;

ValidationReport validate(const RepositoryDoc& doc);

}  // namespace uim::model

#pragma once

#include <stdexcept>
#include <string>

namespace opbac {

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

struct UnsupportedMetric : std::runtime_error {
  explicit UnsupportedMetric(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateSet : std::runtime_error {
  explicit DegenerateSet(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidCut : std::runtime_error {
  explicit InvalidCut(const std::string& what) : std::runtime_error(what) {}
};

struct ConsistencyError : std::runtime_error {
  explicit ConsistencyError(const std::string& what) : std::runtime_error(what) {}
};

struct BackendError : std::runtime_error {
  explicit BackendError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace opbac

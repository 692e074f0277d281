#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace phylotoric {

/// Malformed or inconsistent user input (CLI exit code 2).
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A configured size cap was hit (CLI exit code 3).
class ResourceLimit : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public InputError {
public:
  ParseError(const std::string& what, std::size_t offset)
      : InputError(what + " at byte " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

class CapExceeded : public ResourceLimit {
public:
  using ResourceLimit::ResourceLimit;
};

class ScaleExceeded : public ResourceLimit {
public:
  using ResourceLimit::ResourceLimit;
};

/// Violated hypothesis of a group-based model: H must act freely and
/// transitively on the states and be normal in G.
class ModelError : public InputError {
public:
  enum class Kind { NotTransitive, NotFree, NotNormal, InvalidEmbedding };

  ModelError(Kind kind, const std::string& what) : InputError(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

class TreeError : public InputError {
public:
  enum class Kind { UnknownVertex, NotALeaf };

  TreeError(Kind kind, const std::string& what) : InputError(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

class ShapeMismatch : public InputError {
public:
  using InputError::InputError;
};

class NotInvariant : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Networks and sockets failed to pair up. Indicates a bug, never bad input.
class BijectionFailure : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

class FiberProductError : public InputError {
public:
  enum class Kind { ProjectionNotInSimplex, BlockWidthMismatch };

  FiberProductError(Kind kind, const std::string& what) : InputError(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

}  // namespace phylotoric

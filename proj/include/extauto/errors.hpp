#pragma once

#include <stdexcept>
#include <string>

namespace extauto {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A Cayley table that is not a group (not Latin, no identity, not associative, ...).
class NotAGroup : public Error {
 public:
  explicit NotAGroup(const std::string& msg) : Error("not a group: " + msg) {}
};

// A group-constructor descriptor that is not recognized or out of supported range.
class UnsupportedSpec : public Error {
 public:
  explicit UnsupportedSpec(const std::string& msg) : Error("unsupported group spec: " + msg) {}
};

// A construction would exceed the configured group-order cap.
class OrderCapExceeded : public Error {
 public:
  explicit OrderCapExceeded(const std::string& msg) : Error("order cap exceeded: " + msg) {}
};

// A backtracking/enumeration search space exceeds the configured cap.
class SearchCapExceeded : public Error {
 public:
  explicit SearchCapExceeded(const std::string& msg) : Error("search cap exceeded: " + msg) {}
};

// Subgroup is not normal where normality is required.
class NotNormal : public Error {
 public:
  explicit NotNormal(const std::string& msg) : Error("subgroup not normal: " + msg) {}
};

// An automorphism does not preserve the distinguished subgroup.
class NotRelative : public Error {
 public:
  explicit NotRelative(const std::string& msg) : Error("automorphism not relative: " + msg) {}
};

// A cochain fails the cocycle condition where one is required.
class NotACocycle : public Error {
 public:
  explicit NotACocycle(const std::string& msg) : Error("not a cocycle: " + msg) {}
};

// A pair (alpha, beta) fails the compatibility condition.
class IncompatiblePair : public Error {
 public:
  explicit IncompatiblePair(const std::string& msg) : Error("incompatible pair: " + msg) {}
};

// Factor-system data violating the defining identities.
class InvalidFactorSystem : public Error {
 public:
  explicit InvalidFactorSystem(const std::string& msg) : Error("invalid factor system: " + msg) {}
};

// Two factor systems/extensions that do not lie over the same outer action.
class NotSameFiber : public Error {
 public:
  explicit NotSameFiber(const std::string& msg) : Error("not in the same fiber: " + msg) {}
};

// A pair does not act compatibly on the coefficient module.
class ActionIncompatible : public Error {
 public:
  explicit ActionIncompatible(const std::string& msg) : Error("action incompatible: " + msg) {}
};

// Unknown catalog example name.
class UnknownExample : public Error {
 public:
  explicit UnknownExample(const std::string& msg) : Error("unknown example: " + msg) {}
};

// Malformed serialized input; message names the offending location.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& msg) : Error("parse error: " + msg) {}
};

}  // namespace extauto

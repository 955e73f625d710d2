#pragma once

#include <stdexcept>
#include <string>

namespace fck {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SizeLimitError : public Error { public: using Error::Error; };
class DimensionError : public Error { public: using Error::Error; };
class DivisionError : public Error { public: using Error::Error; };
class DomainError : public Error { public: using Error::Error; };
class CompositionDomainError : public DomainError { public: using DomainError::DomainError; };
class ReversionDomainError : public DomainError { public: using DomainError::DomainError; };
class CapabilityError : public Error { public: using Error::Error; };
class DivergenceError : public Error { public: using Error::Error; };
class PreconditionError : public Error { public: using Error::Error; };
class IncompleteTableError : public Error { public: using Error::Error; };
class BackendError : public Error { public: using Error::Error; };
class ParseError : public Error { public: using Error::Error; };
class ResolutionError : public Error { public: using Error::Error; };

// Raised by a moment oracle; carries the word that failed.
class OracleError : public Error {
 public:
  OracleError(const std::string& what, std::string word)
      : Error(what + " [word: " + word + "]"), word_(std::move(word)) {}
  const std::string& word() const { return word_; }

 private:
  std::string word_;
};

}  // namespace fck

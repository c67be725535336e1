#pragma once

#include <stdexcept>
#include <string>

namespace jester {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// prompt_forge
class InvalidRequestError : public Error { public: using Error::Error; };
class InvalidJokeError : public Error { public: using Error::Error; };
class IncompatibleSubjectError : public Error { public: using Error::Error; };
class InvalidAttackSpecError : public Error { public: using Error::Error; };
class MissingJokeError : public Error { public: using Error::Error; };
class UnexpectedJokeError : public Error { public: using Error::Error; };

// joke_forge
class NotFixedKindError : public Error { public: using Error::Error; };
class AlreadyStrippedError : public Error { public: using Error::Error; };
class GeneratorUnavailableError : public Error { public: using Error::Error; };
class EmptyGenerationError : public Error { public: using Error::Error; };

// datasets
class ParseError : public Error { public: using Error::Error; };
class CountMismatchError : public Error { public: using Error::Error; };
class EmptyDatasetError : public Error { public: using Error::Error; };

// llm_client
class TransportError : public Error { public: using Error::Error; };
class AuthError : public Error { public: using Error::Error; };
class ProtocolError : public Error { public: using Error::Error; };
class ReplayMissError : public Error { public: using Error::Error; };
class InvalidConversationError : public Error { public: using Error::Error; };

class MultiTurnError : public Error {
public:
    MultiTurnError(int turn_index, const std::string& what)
        : Error("turn " + std::to_string(turn_index) + ": " + what),
          turn_index_(turn_index) {}
    int turn_index() const { return turn_index_; }

private:
    int turn_index_;
};

// runner / config
class ConfigError : public Error { public: using Error::Error; };
class OutputIOError : public Error { public: using Error::Error; };

// judge
class InputIOError : public Error { public: using Error::Error; };

// report
class UnjudgedLinesError : public Error { public: using Error::Error; };
class EmptyInputError : public Error { public: using Error::Error; };
class KeyMismatchError : public Error { public: using Error::Error; };

}  // namespace jester

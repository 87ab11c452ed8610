#pragma once

#include <stdexcept>
#include <string>

namespace listcombine {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// numeric kernels
class EmptyInputError : public Error { public: using Error::Error; };
class InsufficientDataError : public Error { public: using Error::Error; };
class OutOfDomainError : public Error { public: using Error::Error; };

// data model
class DesignInvalidError : public Error { public: using Error::Error; };
class AllRecordsExcludedError : public Error { public: using Error::Error; };

// estimators / placebo tests
class DegenerateCellsError : public Error { public: using Error::Error; };
class InsufficientConfessorsError : public DegenerateCellsError {
public: using DegenerateCellsError::DegenerateCellsError;
};
class MethodMismatchError : public Error { public: using Error::Error; };
class DivisionByZeroError : public Error { public: using Error::Error; };
class ZeroPValueError : public Error { public: using Error::Error; };

// simulation
class InvalidParamsError : public Error { public: using Error::Error; };
class DegenerateParamsError : public Error { public: using Error::Error; };
class InvalidGridError : public Error { public: using Error::Error; };

// csv ingestion
class MissingColumnError : public Error { public: using Error::Error; };
class UnparseableCellError : public Error { public: using Error::Error; };
class EmptyFileError : public Error { public: using Error::Error; };

} // namespace listcombine

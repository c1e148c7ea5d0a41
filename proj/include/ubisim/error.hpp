#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ubisim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad or unsupported configuration (scheme, policy, synthesis spec, CLI).
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class DataErrorKind {
  MissingColumn,
  MalformedRow,
  InvalidNumber,
  NegativeIncome,
  NonPositiveWeight,
  UnequalWeightsWithinHousehold,
  DuplicatePersonId,
  MissingBaselineTaxColumns,
  EmptyPopulation,
};

const char* to_string(DataErrorKind kind);

// Microdata validation failure. `row` is the 1-based line number in the
// source (header = line 1), or 0 when not attributable to a row.
class DataError : public Error {
 public:
  DataError(DataErrorKind kind, std::size_t row, const std::string& detail);
  DataErrorKind kind() const { return kind_; }
  std::size_t row() const { return row_; }

 private:
  DataErrorKind kind_;
  std::size_t row_;
};

class UnsolvedRate : public Error {
 public:
  using Error::Error;
};

// The reform cannot be financed with a rate below 100%.
class InfeasibleNeutrality : public Error {
 public:
  InfeasibleNeutrality(const std::string& what, double required_rate, double shortfall_reais)
      : Error(what), required_rate_(required_rate), shortfall_reais_(shortfall_reais) {}
  // Rate the closed form asks for (may be >= 1 or infinite).
  double required_rate() const { return required_rate_; }
  // Annual revenue missing at the maximum admissible rate, in reais.
  double shortfall_reais() const { return shortfall_reais_; }

 private:
  double required_rate_;
  double shortfall_reais_;
};

class NotBracketed : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

class AllZeroIncomes : public Error {
 public:
  using Error::Error;
};

class InconsistentInputs : public Error {
 public:
  using Error::Error;
};

class IoFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace ubisim

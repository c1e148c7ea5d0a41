#include "ubisim/money.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "ubisim/error.hpp"

namespace ubisim {

namespace {

// Parses [-]digits[.digits] into an integer scaled by 10^decimals.
// Extra fraction digits are rounded half-up when `allow_rounding`.
std::int64_t parse_fixed(std::string_view text, int decimals, bool allow_rounding) {
  auto fail = [&] { throw std::invalid_argument("not a decimal number: '" + std::string(text) + "'"); };
  std::size_t i = 0;
  while (i < text.size() && text[i] == ' ') ++i;
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  bool negative = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    negative = text[i] == '-';
    ++i;
  }
  if (i == text.size()) fail();

  int128_t integral = 0;
  bool any_digit = false;
  for (; i < text.size() && text[i] != '.'; ++i) {
    if (text[i] < '0' || text[i] > '9') fail();
    integral = integral * 10 + (text[i] - '0');
    any_digit = true;
    if (integral > std::numeric_limits<std::int64_t>::max()) fail();
  }
  int128_t frac = 0;
  int digits = 0;
  bool round_up = false;
  if (i < text.size()) {
    ++i;  // '.'
    if (i == text.size() && !any_digit) fail();
    for (; i < text.size(); ++i) {
      if (text[i] < '0' || text[i] > '9') fail();
      any_digit = true;
      if (digits < decimals) {
        frac = frac * 10 + (text[i] - '0');
        ++digits;
      } else if (!allow_rounding) {
        fail();
      } else if (digits == decimals) {
        round_up = text[i] >= '5';
        ++digits;
      }
    }
  }
  if (!any_digit) fail();
  for (int d = std::min(digits, decimals); d < decimals; ++d) frac *= 10;
  int128_t scale = 1;
  for (int d = 0; d < decimals; ++d) scale *= 10;
  int128_t v = integral * scale + frac + (round_up ? 1 : 0);
  if (v > std::numeric_limits<std::int64_t>::max()) fail();
  return static_cast<std::int64_t>(negative ? -v : v);
}

std::string fixed_str(std::int64_t v, int decimals) {
  std::int64_t scale = 1;
  for (int d = 0; d < decimals; ++d) scale *= 10;
  const bool neg = v < 0;
  const std::uint64_t mag = neg ? static_cast<std::uint64_t>(-(v + 1)) + 1 : static_cast<std::uint64_t>(v);
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%llu.%0*llu", neg ? "-" : "",
                static_cast<unsigned long long>(mag / scale), decimals,
                static_cast<unsigned long long>(mag % scale));
  return buf;
}

}  // namespace

Money Money::parse(std::string_view text) { return centavos(parse_fixed(text, 2, false)); }

std::string Money::str() const { return fixed_str(value_, 2); }

Money round_half_up_centavos(long double c) {
  return Money::centavos(static_cast<std::int64_t>(std::floor(c + 0.5L)));
}

Weight Weight::parse(std::string_view text) { return micro(parse_fixed(text, 6, true)); }

Weight Weight::from_double(double w) {
  return micro(static_cast<std::int64_t>(std::floor(static_cast<long double>(w) * kScale + 0.5L)));
}

std::string Weight::str() const { return fixed_str(micro_, 6); }

WeightedTotal WeightedTotal::billions(double reais_billions) {
  const long double cents = static_cast<long double>(reais_billions) * 1e11L;
  return raw(static_cast<int128_t>(std::llroundl(cents)) * Weight::kScale);
}

double WeightedTotal::to_reais() const { return static_cast<double>(static_cast<long double>(units_) / 1e8L); }

int128_t WeightedTotal::round_reais() const { return div_round_half_up(units_, 100'000'000); }

int128_t WeightedTotal::round_billions() const {
  return div_round_half_up(units_, static_cast<int128_t>(100'000'000) * 1'000'000'000);
}

std::string WeightedTotal::exact_str() const {
  const int128_t scale = 100'000'000;
  const bool neg = units_ < 0;
  const int128_t mag = neg ? -units_ : units_;
  std::string frac = int128_str(mag % scale);
  frac.insert(0, 8 - frac.size(), '0');
  return (neg ? "-" : "") + int128_str(mag / scale) + "." + frac;
}

int128_t div_round_half_up(int128_t n, int128_t d) {
  if (d <= 0) throw std::invalid_argument("div_round_half_up: divisor must be positive");
  // floor((2n + d) / 2d)
  const int128_t num = 2 * n + d;
  const int128_t den = 2 * d;
  int128_t q = num / den;
  if ((num % den != 0) && (num < 0)) --q;
  return q;
}

std::string int128_str(int128_t v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  std::string out;
  while (v != 0) {
    int digit = static_cast<int>(v % 10);
    if (digit < 0) digit = -digit;
    out.insert(out.begin(), static_cast<char>('0' + digit));
    v /= 10;
  }
  if (neg) out.insert(out.begin(), '-');
  return out;
}

const char* to_string(DataErrorKind kind) {
  switch (kind) {
    case DataErrorKind::MissingColumn: return "MissingColumn";
    case DataErrorKind::MalformedRow: return "MalformedRow";
    case DataErrorKind::InvalidNumber: return "InvalidNumber";
    case DataErrorKind::NegativeIncome: return "NegativeIncome";
    case DataErrorKind::NonPositiveWeight: return "NonPositiveWeight";
    case DataErrorKind::UnequalWeightsWithinHousehold: return "UnequalWeightsWithinHousehold";
    case DataErrorKind::DuplicatePersonId: return "DuplicatePersonId";
    case DataErrorKind::MissingBaselineTaxColumns: return "MissingBaselineTaxColumns";
    case DataErrorKind::EmptyPopulation: return "EmptyPopulation";
  }
  return "DataError";
}

DataError::DataError(DataErrorKind kind, std::size_t row, const std::string& detail)
    : Error(std::string(to_string(kind)) + (row ? " at row " + std::to_string(row) : std::string()) +
            ": " + detail),
      kind_(kind),
      row_(row) {}

}  // namespace ubisim
